// amencert: finite-scale amenability certificates from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 resource guard exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "amencert/serialize.hpp"

using namespace amencert;

namespace {

struct ConfigFile {
    std::map<std::string, std::string> kv;

    static ConfigFile load(const std::string& path) {
        ConfigFile cfg;
        std::ifstream in(path);
        if (!in) throw SpecError("cannot open config file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto strip = [](std::string s) {
                auto a = s.find_first_not_of(" \t\r");
                auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = strip(line.substr(0, eq));
            std::string val = strip(line.substr(eq + 1));
            if (key.empty()) throw SpecError("malformed config line: " + line);
            if (!cfg.kv.emplace(key, val).second)
                throw SpecError("duplicate config key: " + key);
        }
        return cfg;
    }
};

std::vector<int> parse_radii(const std::string& text) {
    std::vector<int> out;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        int a = std::stoi(text.substr(0, dots));
        int b = std::stoi(text.substr(dots + 2));
        if (a > b) throw SpecError("radii range is empty: " + text);
        for (int r = a; r <= b; ++r) out.push_back(r);
        return out;
    }
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw SpecError("radii must be nonempty");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw SpecError("radii must be strictly increasing");
    return out;
}

NumericMode parse_mode(const std::string& text) {
    if (text == "exact") return NumericMode::Exact;
    if (text == "float") return NumericMode::Float;
    throw SpecError("mode must be 'exact' or 'float', got: " + text);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot read: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Wall-clock data lives in a sidecar so the certificate bytes stay
/// deterministic across identical runs.
void write_sidecar(const std::string& out_path, double seconds) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    long unix_s = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    std::ostringstream meta;
    meta << "{\n  \"written_unix\": " << unix_s << ",\n  \"seconds\": " << seconds << "\n}\n";
    write_file(out_path + ".meta.json", meta.str());
}

struct CommonArgs {
    std::string group_spec;
    std::string space_spec = "point";
    std::string mode = "exact";
    std::string out;
};

RFunctional parse_phi(const std::string& text, const Group& group, const CompactSpace& space) {
    if (text == "sigma") return RFunctional::sigma_functional(group, space);
    if (text.rfind("ev:", 0) == 0) {
        std::string body = text.substr(3);
        auto colon = body.find(':');
        std::string gtext = colon == std::string::npos ? body : body.substr(0, colon);
        GroupElement g = group.from_string(gtext);
        Cell cell = Cell::unit();
        if (space.kind() == SpaceKind::Point)
            cell = Cell::unit();
        else if (colon == std::string::npos)
            throw SpecError("ev:<g>:<cell> needs a cell for this space");
        else
            cell = cell_from_string(space, body.substr(colon + 1));
        return RFunctional::evaluation(group, space, g, cell);
    }
    throw SpecError("phi must be 'sigma' or 'ev:<g>[:<cell>]', got: " + text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amencert: finite-scale certificates for amenability of group actions"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (CLI flags override)");
    long size_guard = -1;
    app.add_option("--size-guard", size_guard, "ball size cap (also env AMENCERT_SIZE_GUARD)");

    CommonArgs common;
    std::string radii_text, g1_text = "a", map_text, to_space, in_path, phi_text = "sigma";
    std::string csv_path, json_path, cert_dir, dump_lp;
    int n = 1, rank = 2, jobs = 1, big_r = 1, flat_window = 3;
    double tol_flag = -1;
    bool signfree = false;
    std::string eps_vanish = "1/1000", flat_ratio = "1/100";

    auto add_common = [&](CLI::App* sub, bool with_space = true) {
        sub->add_option("--group", common.group_spec, "group descriptor (Z^d, F_k, perm:[...], prod(,))");
        if (with_space) sub->add_option("--space", common.space_spec, "space descriptor");
        sub->add_option("--mode", common.mode, "exact | float");
        sub->add_option("--out", common.out, "output certificate path (JSON)");
    };

    CLI::App* folner = app.add_subcommand("folner", "solve the Folner LP at one radius");
    add_common(folner);
    folner->add_option("-n,--n", n, "truncation radius");
    folner->add_flag("--signfree", signfree, "sign-unconstrained distance variant");
    folner->add_option("--dump-lp", dump_lp, "write the LP in plain-text row form");

    CLI::App* ponzi = app.add_subcommand("ponzi", "solve the Ponzi LP at one radius");
    add_common(ponzi);
    ponzi->add_option("-n,--n", n, "truncation radius");
    ponzi->add_option("--dump-lp", dump_lp, "write the LP in plain-text row form");

    CLI::App* sweep = app.add_subcommand("sweep", "Folner/Ponzi sweep over radii with verdict");
    add_common(sweep);
    sweep->add_option("--radii", radii_text, "a..b or comma list");
    sweep->add_option("--csv", csv_path, "trend table output");
    sweep->add_option("--json", json_path, "status report output");
    sweep->add_option("--cert-dir", cert_dir, "directory for per-radius folner certificates");
    sweep->add_option("--jobs", jobs, "parallel radius evaluation");
    bool no_ponzi = false;
    sweep->add_flag("--no-ponzi", no_ponzi, "skip the Ponzi LP at each radius");
    sweep->add_option("--eps-vanish", eps_vanish, "amenable-evidence threshold");
    sweep->add_option("--flat-window", flat_window, "flatness window");
    sweep->add_option("--flat-ratio", flat_ratio, "flatness ratio");

    CLI::App* tent = app.add_subcommand("tent", "tent-function sequence over OnePoint(G)");
    add_common(tent, false);
    tent->add_option("--g1", g1_text, "the displacement element (default first generator)");
    tent->add_option("-n,--n", n, "largest n of the sequence");

    CLI::App* boundary = app.add_subcommand("boundary", "prefix-averaging chain on the boundary of F_k");
    boundary->add_option("--rank", rank, "free rank k >= 2");
    boundary->add_option("-n,--n", n, "number of averaged prefixes");
    boundary->add_option("--mode", common.mode, "exact | float (certificates are exact)");
    boundary->add_option("--out", common.out, "output certificate path");

    CLI::App* transfer = app.add_subcommand("transfer", "push a chain through a fiber-averaging map");
    add_common(transfer);
    transfer->add_option("--to-space", to_space, "target space descriptor");
    transfer->add_option("--map", map_text, "comma list: image of each source point");
    transfer->add_option("--in", in_path, "input folner certificate (over the source space)");

    CLI::App* verify = app.add_subcommand("verify", "re-verify a certificate file");
    std::string verify_path;
    verify->add_option("file", verify_path, "certificate JSON")->required();
    verify->add_option("--tol", tol_flag, "violation tolerance (default: 0 exact, 1e-7 float)");

    CLI::App* residual = app.add_subcommand("residual", "finite-scale class residual of a functional");
    add_common(residual);
    residual->add_option("-n,--n", n, "chain support radius");
    residual->add_option("-R,--R", big_r, "defect budget parameter (defect <= 1/R)");
    residual->add_option("--phi", phi_text, "sigma | ev:<g>[:<cell>]");

    try {
        app.parse(argc, argv);

        // config file defaults (CLI flags win)
        if (!config_path.empty()) {
            ConfigFile cfg = ConfigFile::load(config_path);
            auto maybe = [&](const char* key, std::string& target, const std::string& flag) {
                auto it = cfg.kv.find(key);
                if (it == cfg.kv.end()) return;
                CLI::App* sub = app.get_subcommands().front();
                const CLI::Option* top = app.get_option_no_throw(flag);
                const CLI::Option* below = sub->get_option_no_throw(flag);
                bool given = (top && top->count() > 0) || (below && below->count() > 0);
                if (!given) target = it->second;
            };
            maybe("group", common.group_spec, "--group");
            maybe("space", common.space_spec, "--space");
            maybe("mode", common.mode, "--mode");
            maybe("radii", radii_text, "--radii");
            maybe("out", common.out, "--out");
            for (const auto& [k, v] : cfg.kv)
                if (k != "group" && k != "space" && k != "mode" && k != "radii" && k != "out")
                    throw SpecError("unknown config key: " + k);
        }

        if (const char* env = std::getenv("AMENCERT_SIZE_GUARD"); env && size_guard < 0)
            size_guard = std::stol(env);
        if (size_guard > 0) {
            Guards g = guards();
            g.ball_cap = static_cast<std::size_t>(size_guard);
            set_guards(g);
        }

        auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&t0] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        if (folner->parsed()) {
            if (common.group_spec.empty()) throw SpecError("--group is required");
            Group group = Group::parse(common.group_spec);
            CompactSpace space = CompactSpace::parse(group, common.space_spec);
            CertOptions opts;
            opts.mode = parse_mode(common.mode);
            opts.variant = signfree ? PrimalVariant::SignFree : PrimalVariant::Positive;
            if (!dump_lp.empty())
                write_file(dump_lp, dump_model(build_folner_model(group, space, n, opts.variant).lp));
            FolnerCertificate cert = folner_optimize(group, space, n, opts);
            if (!common.out.empty()) {
                write_file(common.out, folner_cert_to_json(cert));
                write_sidecar(common.out, elapsed());
            }
            std::cout << "folner group=" << group.spec() << " space=" << common.space_spec
                      << " n=" << n << " t=" << value_to_string(cert.defect, opts.mode)
                      << " mode=" << common.mode
                      << (signfree ? " variant=signfree" : "") << "\n";
            return 0;
        }

        if (ponzi->parsed()) {
            if (common.group_spec.empty()) throw SpecError("--group is required");
            Group group = Group::parse(common.group_spec);
            CompactSpace space = CompactSpace::parse(group, common.space_spec);
            CertOptions opts;
            opts.mode = parse_mode(common.mode);
            if (!dump_lp.empty())
                write_file(dump_lp, dump_model(build_ponzi_model(group, space, n).lp));
            PonziResult res = ponzi_optimize(group, space, n, opts);
            if (!res.feasible) {
                std::cout << "ponzi group=" << group.spec() << " space=" << common.space_spec
                          << " n=" << n << " infeasible (truncated sign-free optimum is 0)\n";
                return 0;
            }
            if (!common.out.empty()) {
                write_file(common.out, ponzi_cert_to_json(*res.cert));
                write_sidecar(common.out, elapsed());
            }
            std::cout << "ponzi group=" << group.spec() << " space=" << common.space_spec
                      << " n=" << n << " M=" << value_to_string(res.cert->norm_bound, opts.mode)
                      << " D=" << value_to_string(res.cert->lower_bound, opts.mode)
                      << " mode=" << common.mode << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            if (common.group_spec.empty()) throw SpecError("--group is required");
            if (radii_text.empty()) throw SpecError("--radii is required");
            Group group = Group::parse(common.group_spec);
            CompactSpace space = CompactSpace::parse(group, common.space_spec);
            StatusOptions opts;
            opts.cert.mode = parse_mode(common.mode);
            opts.thresholds.eps_vanish = parse_rational(eps_vanish);
            opts.thresholds.flat_window = flat_window;
            opts.thresholds.flat_ratio = parse_rational(flat_ratio);
            opts.with_ponzi = !no_ponzi;
            opts.jobs = jobs;
            std::vector<int> radii = parse_radii(radii_text);
            ClassStatusReport report = fundamental_class_status(group, space, radii, opts);
            if (!csv_path.empty()) write_file(csv_path, status_report_to_csv(report));
            if (!json_path.empty()) {
                write_file(json_path, status_report_to_json(report));
                write_sidecar(json_path, elapsed());
            }
            if (!cert_dir.empty()) {
                for (int r : radii) {
                    FolnerCertificate cert = folner_optimize(group, space, r, opts.cert);
                    write_file(cert_dir + "/folner_n" + std::to_string(r) + ".json",
                               folner_cert_to_json(cert));
                }
            }
            std::cout << "sweep group=" << group.spec() << " space=" << common.space_spec
                      << " radii=" << radii_text << " t_last="
                      << to_string(report.records.back().t_star)
                      << " verdict=" << verdict_name(report.verdict) << "\n";
            return 0;
        }

        if (tent->parsed()) {
            if (common.group_spec.empty()) throw SpecError("--group is required");
            Group group = Group::parse(common.group_spec);
            TentSequence seq(group, group.from_string(g1_text));
            if (!common.out.empty()) {
                write_file(common.out, tent_report_to_json(seq, n));
                write_sidecar(common.out, elapsed());
            }
            std::cout << "tent group=" << group.spec() << " g1=" << g1_text << " n=" << n
                      << " pair_ev=" << to_string(seq.pair_ev(n))
                      << " norm=" << to_string(seq.norm(n))
                      << " defect=" << to_string(seq.defect(n)) << "\n";
            return 0;
        }

        if (boundary->parsed()) {
            bool materialize = false;
            {
                // explicit chains only while the support stays small
                double size = 2.0 * rank;
                for (int i = 1; i < n; ++i) size *= (2.0 * rank - 1);
                materialize = size <= 4000;
            }
            FolnerCertificate cert = BoundaryFolner::certificate(rank, n, materialize);
            if (!common.out.empty()) {
                write_file(common.out, boundary_cert_to_json(cert, rank, n, materialize));
                write_sidecar(common.out, elapsed());
            }
            std::cout << "boundary rank=" << rank << " n=" << n
                      << " defect=" << to_string(cert.defect) << " sigma=1 norm=1"
                      << (materialize ? "" : " (structural chain)") << "\n";
            return 0;
        }

        if (transfer->parsed()) {
            if (in_path.empty()) throw SpecError("--in certificate is required");
            if (to_space.empty() || map_text.empty())
                throw SpecError("--to-space and --map are required");
            FolnerCertificate cert = folner_cert_from_json(read_file(in_path));
            CompactSpace target = CompactSpace::parse(cert.group, to_space);
            std::vector<std::size_t> table;
            {
                std::istringstream ss(map_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) table.push_back(std::stoul(tok));
            }
            TransferMap mu(EquivariantMap(cert.space, target, table));
            RChain pushed = transfer_chain(mu, cert.chain);
            FolnerCertificate out_cert(cert.group, target);
            out_cert.radius = cert.radius;
            out_cert.variant = cert.variant;
            out_cert.chain = pushed;
            out_cert.defect = chain_defect(pushed);
            out_cert.solver.mode = cert.solver.mode;
            out_cert.solver.construction = true;
            out_cert.solver.exact_certified = cert.solver.mode == NumericMode::Exact;
            if (!common.out.empty()) {
                write_file(common.out, folner_cert_to_json(out_cert));
                write_sidecar(common.out, elapsed());
            }
            std::cout << "transfer n=" << cert.radius << " defect_in=" << to_string(cert.defect)
                      << " defect_out=" << to_string(out_cert.defect) << "\n";
            return 0;
        }

        if (verify->parsed()) {
            std::string text = read_file(verify_path);
            Rational tol(0);
            if (tol_flag >= 0) {
                tol = rational_from_double(tol_flag);
            } else {
                auto j = nlohmann::json::parse(text);
                if (j.contains("mode") && j.at("mode") == "float") tol = frac(1, 10'000'000);
            }
            VerifyOutcome outcome = verify_certificate_json(text, tol);
            std::cout << "verify " << verify_path << " " << outcome.summary << "\n";
            return outcome.ok ? 0 : 1;
        }

        if (residual->parsed()) {
            if (common.group_spec.empty()) throw SpecError("--group is required");
            Group group = Group::parse(common.group_spec);
            CompactSpace space = CompactSpace::parse(group, common.space_spec);
            CertOptions opts;
            opts.mode = parse_mode(common.mode);
            RFunctional phi = parse_phi(phi_text, group, space);
            Rational value = functional_class_residual(phi, group, space, n, big_r, opts);
            std::cout << "residual phi=" << phi_text << " n=" << n << " R=" << big_r
                      << " value=" << value_to_string(value, opts.mode) << "\n";
            return 0;
        }

        throw SpecError("no subcommand");
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const GuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
