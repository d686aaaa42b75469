#include "amencert/serialize.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace amencert {

using json = nlohmann::ordered_json;

std::string value_to_string(const Rational& v, NumericMode mode) {
    if (mode == NumericMode::Exact) return to_string(v);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", to_double_nearest_even(v));
    return buf;
}

Rational value_from_string(const std::string& text) {
    auto epos = text.find_first_of("eE");
    if (epos == std::string::npos) return parse_rational(text);
    Rational mant = parse_rational(text.substr(0, epos));
    int exp = std::stoi(text.substr(epos + 1));
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp < 0 ? -exp : exp));
    Rational r = exp >= 0 ? Rational(mant * p10) : Rational(mant / Rational(p10));
    r.canonicalize();
    return r;
}

namespace {

NumericMode mode_from_string(const std::string& s) {
    if (s == "exact") return NumericMode::Exact;
    if (s == "float") return NumericMode::Float;
    throw SpecError("unknown numeric mode: " + s);
}

json chain_entries_json(const RChain& chain, NumericMode mode) {
    json entries = json::array();
    const auto& space = chain.space();
    const auto& group = chain.group();
    for (const auto& e : chain.entries()) {
        switch (space.kind()) {
            case SpaceKind::Point:
                entries.push_back({group.to_string(e.g), "*",
                                   value_to_string(e.fn.scalar, mode)});
                break;
            case SpaceKind::Finite:
                for (std::size_t x = 0; x < e.fn.values.size(); ++x)
                    if (!(e.fn.values[x] == 0))
                        entries.push_back({group.to_string(e.g), std::to_string(x),
                                           value_to_string(e.fn.values[x], mode)});
                break;
            case SpaceKind::OnePoint: {
                for (const auto& [p, v] : e.fn.support)
                    entries.push_back({group.to_string(e.g), group.to_string(p),
                                       value_to_string(v, mode)});
                if (!(e.fn.tail == 0))
                    entries.push_back({group.to_string(e.g), "inf",
                                       value_to_string(e.fn.tail, mode)});
                break;
            }
            case SpaceKind::FreeBoundary: {
                // store values on cylinders at the function's own depth
                int d = std::max(1, e.fn.cyl.depth());
                for (const auto& [w, v] : e.fn.cyl.to_table(d))
                    if (!(v == 0))
                        entries.push_back({group.to_string(e.g), letters_to_string(w),
                                           value_to_string(v, mode)});
                break;
            }
        }
    }
    return entries;
}

json chain_json(const RChain& chain, NumericMode mode) {
    json j;
    j["group_spec"] = chain.group().spec();
    j["space_spec"] = chain.space().spec();
    j["mode"] = mode_name(mode);
    j["entries"] = chain_entries_json(chain, mode);
    return j;
}

RChain chain_from(const json& j) {
    Group group = Group::parse(j.at("group_spec").get<std::string>());
    CompactSpace space = CompactSpace::parse(group, j.at("space_spec").get<std::string>());
    RChain chain(group, space);

    // group triples by group element first: cell values are absolute (the
    // OnePoint tail in particular applies to every unlisted point, so entries
    // must be reassembled structurally, not added one by one)
    std::map<GroupElement, std::vector<std::pair<std::string, Rational>>, ElementLexLess> per_g;
    for (const auto& entry : j.at("entries")) {
        GroupElement g = group.from_string(entry.at(0).get<std::string>());
        per_g[g].emplace_back(entry.at(1).get<std::string>(),
                              value_from_string(entry.at(2).get<std::string>()));
    }

    for (const auto& [g, cells] : per_g) {
        switch (space.kind()) {
            case SpaceKind::Point: {
                Rational v(0);
                for (const auto& [text, val] : cells) v += val;
                chain.add_term(g, SpaceFn<Rational>::point(v));
                break;
            }
            case SpaceKind::Finite: {
                std::vector<Rational> vals(space.finite_size(), Rational(0));
                for (const auto& [text, val] : cells)
                    vals[cell_from_string(space, text).index] = val;
                chain.add_term(g, SpaceFn<Rational>::finite(std::move(vals)));
                break;
            }
            case SpaceKind::OnePoint: {
                std::map<GroupElement, Rational, ElementLexLess> sup;
                Rational tail(0);
                for (const auto& [text, val] : cells) {
                    Cell c = cell_from_string(space, text);
                    if (c.kind == Cell::Kind::Infinity)
                        tail = val;
                    else
                        sup.emplace(c.point, val);
                }
                chain.add_term(g, SpaceFn<Rational>::one_point(std::move(sup), tail));
                break;
            }
            case SpaceKind::FreeBoundary: {
                // leaf cylinders at a common depth are disjoint, so the
                // scaled indicators add up to the stored function
                SpaceFn<Rational> fn = SpaceFn<Rational>::zero(space);
                for (const auto& [text, val] : cells) {
                    auto w = letters_from_string(text, space.boundary_rank());
                    auto ind = CylinderFn<Rational>::indicator(space.boundary_rank(), w);
                    Rational v = val;
                    fn = add(fn, SpaceFn<Rational>::boundary(
                                     ind.map([&v](const Rational& x) -> Rational {
                                         return Rational(x * v);
                                     })));
                }
                chain.add_term(g, std::move(fn));
                break;
            }
        }
    }
    return chain;
}

json solver_json(const SolverMeta& meta) {
    json j;
    j["pivot_rule"] = meta.construction ? "construction" : pivot_rule_name(meta.pivot_rule);
    j["iterations"] = meta.iterations;
    j["exact_certified"] = meta.exact_certified;
    return j;
}

SolverMeta solver_from(const json& j, NumericMode mode) {
    SolverMeta meta;
    meta.mode = mode;
    std::string rule = j.at("pivot_rule").get<std::string>();
    meta.construction = rule == "construction";
    meta.pivot_rule = rule == "bland" ? PivotRule::Bland : PivotRule::DantzigBland;
    meta.iterations = j.at("iterations").get<long>();
    meta.exact_certified = j.at("exact_certified").get<bool>();
    return meta;
}

}  // namespace

std::string chain_to_json(const RChain& chain, NumericMode mode, int indent) {
    return chain_json(chain, mode).dump(indent) + "\n";
}

RChain chain_from_json(const std::string& text) { return chain_from(json::parse(text)); }

std::string folner_cert_to_json(const FolnerCertificate& cert, int indent) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "folner";
    j["group_spec"] = cert.group.spec();
    j["space_spec"] = cert.space.spec();
    j["radius"] = cert.radius;
    j["mode"] = mode_name(cert.solver.mode);
    j["variant"] = variant_name(cert.variant);
    j["defect"] = value_to_string(cert.defect, cert.solver.mode);
    j["data"] = chain_json(cert.chain, cert.solver.mode);
    j["solver"] = solver_json(cert.solver);
    FolnerVerifyReport rep = verify_folner(cert);
    j["residuals"] = {
        {"negativity", value_to_string(rep.worst_negativity, cert.solver.mode)},
        {"sigma_deviation", value_to_string(rep.sigma_deviation, cert.solver.mode)},
        {"defect_delta",
         value_to_string(rat_abs(rep.defect_recomputed - rep.defect_stored), cert.solver.mode)}};
    return j.dump(indent) + "\n";
}

FolnerCertificate folner_cert_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("kind") != "folner") throw SpecError("not a folner certificate");
    RChain chain = chain_from(j.at("data"));
    FolnerCertificate cert(chain.group(), chain.space());
    cert.radius = j.at("radius").get<int>();
    cert.variant = j.at("variant") == "signfree" ? PrimalVariant::SignFree
                                                 : PrimalVariant::Positive;
    cert.chain = std::move(chain);
    cert.defect = value_from_string(j.at("defect").get<std::string>());
    cert.solver = solver_from(j.at("solver"), mode_from_string(j.at("mode").get<std::string>()));
    return cert;
}

std::string ponzi_cert_to_json(const PonziCertificate& cert, int indent) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "ponzi";
    j["group_spec"] = cert.group.spec();
    j["space_spec"] = cert.space.spec();
    j["radius"] = cert.radius;
    j["mode"] = mode_name(cert.solver.mode);
    j["norm_bound"] = value_to_string(cert.norm_bound, cert.solver.mode);
    j["lower_bound"] = value_to_string(cert.lower_bound, cert.solver.mode);
    json funcs = json::array();
    for (std::size_t si = 0; si < cert.psi.size(); ++si) {
        json f;
        f["generator"] = cert.group.to_string(cert.group.generators()[si]);
        json entries = json::array();
        for (const auto& [g, cell, v] : cert.psi[si].coefficients())
            entries.push_back({cert.group.to_string(g), cell_to_string(cert.space, cell),
                               value_to_string(v, cert.solver.mode)});
        f["entries"] = std::move(entries);
        funcs.push_back(std::move(f));
    }
    j["data"] = {{"functionals", std::move(funcs)}};
    j["solver"] = solver_json(cert.solver);
    PonziVerifyReport rep = verify_ponzi(cert);
    j["residuals"] = {
        {"constancy", value_to_string(rep.constancy_violation, cert.solver.mode)},
        {"normalization", value_to_string(rep.normalization_delta, cert.solver.mode)},
        {"norm_delta",
         value_to_string(rat_abs(rep.norm_recomputed - rep.norm_stored), cert.solver.mode)}};
    return j.dump(indent) + "\n";
}

PonziCertificate ponzi_cert_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("kind") != "ponzi") throw SpecError("not a ponzi certificate");
    Group group = Group::parse(j.at("group_spec").get<std::string>());
    CompactSpace space = CompactSpace::parse(group, j.at("space_spec").get<std::string>());
    PonziCertificate cert(group, space);
    cert.radius = j.at("radius").get<int>();
    cert.norm_bound = value_from_string(j.at("norm_bound").get<std::string>());
    cert.lower_bound = value_from_string(j.at("lower_bound").get<std::string>());
    const auto& funcs = j.at("data").at("functionals");
    if (funcs.size() != group.generators().size())
        throw SpecError("ponzi certificate needs one functional per generator");
    for (const auto& f : funcs) {
        RFunctional psi(group, space);
        for (const auto& entry : f.at("entries"))
            psi.add_term(group.from_string(entry.at(0).get<std::string>()),
                         cell_from_string(space, entry.at(1).get<std::string>()),
                         value_from_string(entry.at(2).get<std::string>()));
        cert.psi.push_back(std::move(psi));
    }
    cert.solver = solver_from(j.at("solver"), mode_from_string(j.at("mode").get<std::string>()));
    return cert;
}

std::string boundary_cert_to_json(const FolnerCertificate& cert, int rank, int n,
                                  bool explicit_chain, int indent) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "folner";
    j["group_spec"] = cert.group.spec();
    j["space_spec"] = cert.space.spec();
    j["radius"] = n;
    j["mode"] = mode_name(cert.solver.mode);
    j["variant"] = "positive";
    j["defect"] = value_to_string(cert.defect, cert.solver.mode);
    if (explicit_chain) {
        j["data"] = chain_json(cert.chain, cert.solver.mode);
    } else {
        j["data"] = {{"structured", "boundary_prefix_average"}, {"rank", rank}, {"n", n}};
    }
    j["solver"] = solver_json(cert.solver);
    FolnerVerifyReport rep = verify_boundary_folner(rank, n, cert.defect);
    j["residuals"] = {
        {"negativity", "0"},
        {"sigma_deviation", value_to_string(rep.sigma_deviation, cert.solver.mode)},
        {"defect_delta",
         value_to_string(rat_abs(rep.defect_recomputed - rep.defect_stored), cert.solver.mode)}};
    return j.dump(indent) + "\n";
}

std::string tent_report_to_json(const TentSequence& tent, int n_max, int indent) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "tent";
    j["group_spec"] = tent.group().spec();
    j["space_spec"] = "onepoint";
    j["g1"] = tent.group().to_string(tent.g1());
    j["n_max"] = n_max;
    j["mode"] = "exact";
    json rows = json::array();
    for (int n = 1; n <= n_max; ++n) {
        rows.push_back({{"n", n},
                        {"pair_ev", to_string(tent.pair_ev(n))},
                        {"norm", to_string(tent.norm(n))},
                        {"defect", to_string(tent.defect(n))}});
    }
    j["rows"] = std::move(rows);
    return j.dump(indent) + "\n";
}

std::string status_report_to_json(const ClassStatusReport& report, int indent) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "status";
    j["group_spec"] = report.group.spec();
    j["space_spec"] = report.space.spec();
    j["thresholds"] = {{"eps_vanish", to_string(report.thresholds.eps_vanish)},
                       {"flat_window", report.thresholds.flat_window},
                       {"flat_ratio", to_string(report.thresholds.flat_ratio)}};
    json rows = json::array();
    for (const auto& r : report.records) {
        json row;
        row["radius"] = r.radius;
        row["t_star"] = to_string(r.t_star);
        if (r.m_star)
            row["m_star"] = to_string(*r.m_star);
        else
            row["m_star"] = nullptr;
        if (r.duality_gap)
            row["duality_gap"] = to_string(*r.duality_gap);
        else
            row["duality_gap"] = nullptr;
        rows.push_back(std::move(row));
    }
    j["records"] = std::move(rows);
    j["verdict"] = verdict_name(report.verdict);
    j["note"] = ClassStatusReport::kCaveat;
    return j.dump(indent) + "\n";
}

std::string status_report_to_csv(const ClassStatusReport& report) {
    std::string out = "radius,t_star,m_star,duality_gap,seconds\n";
    char buf[64];
    for (const auto& r : report.records) {
        out += std::to_string(r.radius);
        out += ",";
        out += to_string(r.t_star);
        out += ",";
        if (r.m_star) out += to_string(*r.m_star);
        out += ",";
        if (r.duality_gap) out += to_string(*r.duality_gap);
        out += ",";
        std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
        out += buf;
        out += "\n";
    }
    return out;
}

std::string certificate_kind(const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "folner" && j.at("data").contains("structured")) return "boundary";
    return kind;
}

VerifyOutcome verify_certificate_json(const std::string& text, const Rational& tol) {
    json j = json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    VerifyOutcome out;
    if (kind == "folner") {
        if (j.at("data").contains("structured")) {
            int rank = j.at("data").at("rank").get<int>();
            int n = j.at("data").at("n").get<int>();
            Rational stored = value_from_string(j.at("defect").get<std::string>());
            auto rep = verify_boundary_folner(rank, n, stored);
            out.ok = rep.pass(tol);
            out.summary = std::string("boundary folner rank=") + std::to_string(rank) +
                          " n=" + std::to_string(n) + " defect=" + to_string(rep.defect_recomputed) +
                          (out.ok ? " PASS" : " FAIL");
            return out;
        }
        FolnerCertificate cert = folner_cert_from_json(text);
        auto rep = verify_folner(cert);
        out.ok = rep.pass(tol);
        out.summary = "folner n=" + std::to_string(cert.radius) +
                      " defect=" + to_string(rep.defect_recomputed) +
                      " max_violation=" + to_string(rep.max_violation()) +
                      (out.ok ? " PASS" : " FAIL");
        return out;
    }
    if (kind == "ponzi") {
        PonziCertificate cert = ponzi_cert_from_json(text);
        auto rep = verify_ponzi(cert, tol);
        out.ok = rep.pass(tol);
        out.summary = "ponzi n=" + std::to_string(cert.radius) + " M=" +
                      to_string(rep.norm_recomputed) +
                      " max_violation=" + to_string(rep.max_violation()) +
                      (out.ok ? " PASS" : " FAIL");
        return out;
    }
    if (kind == "tent") {
        Group group = Group::parse(j.at("group_spec").get<std::string>());
        TentSequence tent(group, group.from_string(j.at("g1").get<std::string>()));
        bool ok = true;
        for (const auto& row : j.at("rows")) {
            int n = row.at("n").get<int>();
            ok = ok && value_from_string(row.at("pair_ev").get<std::string>()) == tent.pair_ev(n);
            ok = ok && value_from_string(row.at("norm").get<std::string>()) == tent.norm(n);
            ok = ok && value_from_string(row.at("defect").get<std::string>()) == tent.defect(n);
        }
        out.ok = ok;
        out.summary = std::string("tent n_max=") + std::to_string(j.at("n_max").get<int>()) +
                      (ok ? " PASS" : " FAIL");
        return out;
    }
    throw SpecError("unknown certificate kind: " + kind);
}

}  // namespace amencert
