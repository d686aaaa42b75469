#include "amencert/homology.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace amencert {

Verdict decide_verdict(const std::vector<RadiusRecord>& records, const StatusThresholds& th) {
    if (records.empty()) return Verdict::Inconclusive;
    const Rational& last = records.back().t_star;
    if (last < th.eps_vanish) return Verdict::EvidenceAmenable;
    int window = th.flat_window;
    if (static_cast<int>(records.size()) >= window + 1) {
        bool flat = true;
        for (int k = 0; k < window; ++k) {
            const Rational& prev = records[records.size() - 2 - k].t_star;
            const Rational& cur = records[records.size() - 1 - k].t_star;
            if (prev == 0) {
                flat = false;
                break;
            }
            Rational rel = (prev - cur) / prev;
            if (rel >= th.flat_ratio) {
                flat = false;
                break;
            }
        }
        if (flat) return Verdict::EvidenceNonamenable;
    }
    return Verdict::Inconclusive;
}

ClassStatusReport fundamental_class_status(const Group& group, const CompactSpace& space,
                                           const std::vector<int>& radii,
                                           const StatusOptions& opts) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw SpecError("radii must be strictly increasing");
    if (radii.empty()) throw SpecError("radii must be nonempty");

    ClassStatusReport report(group, space);
    report.thresholds = opts.thresholds;
    report.records.resize(radii.size());

    bool ponzi_possible = opts.with_ponzi && (space.kind() == SpaceKind::Point ||
                                              space.kind() == SpaceKind::Finite);

    auto run_one = [&](std::size_t idx) {
        auto start = std::chrono::steady_clock::now();
        RadiusRecord rec;
        rec.radius = radii[idx];
        FolnerCertificate cert = folner_optimize(group, space, radii[idx], opts.cert);
        rec.t_star = cert.defect;
        if (ponzi_possible) {
            PonziResult pz = ponzi_optimize(group, space, radii[idx], opts.cert);
            if (pz.feasible) {
                rec.m_star = pz.cert->norm_bound;
                rec.duality_gap = rat_abs(rec.t_star * *rec.m_star - 1);
            }
        }
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.records[idx] = std::move(rec);
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < radii.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < radii.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }

    report.verdict = decide_verdict(report.records, opts.thresholds);
    return report;
}

Rational functional_class_residual(const RFunctional& phi, const Group& group,
                                   const CompactSpace& space, int n, int R,
                                   const CertOptions& opts) {
    if (R < 1) throw SpecError("support radius R must be >= 1");
    if (space.kind() == SpaceKind::FreeBoundary)
        throw SpecError("class residuals run on Point, Finite and OnePoint spaces");
    auto cells = lp_variable_cells(group, space, n);
    auto bn = group.ball(n);
    auto bn1 = group.ball(n + 1);
    const auto& S = group.generators();

    // phi must be readable on the truncation
    if (phi.tag() != DualTag::Sigma) {
        for (const auto& [g, cell, v] : phi.coefficients()) {
            if (!bn->contains(g)) throw SpecError("phi is supported outside B_n");
            bool found = false;
            for (const auto& c : cells) found = found || c == cell;
            if (!found) throw SpecError("phi references a cell outside the truncation");
        }
    }

    // shared model pieces: xi free, w >= |xi| with per-cell mass <= 1,
    // u >= |(delta xi)_s| with per-(s, refined cell) mass <= 1/R, sigma = c.
    LpModel lp;
    std::vector<std::vector<int>> xi(bn->size(), std::vector<int>(cells.size(), -1));
    std::vector<std::vector<int>> w(bn->size(), std::vector<int>(cells.size(), -1));
    for (std::size_t gi = 0; gi < bn->size(); ++gi)
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            xi[gi][ci] = lp.add_var("xi", std::nullopt);
            w[gi][ci] = lp.add_var("w", Rational(0));
        }
    int cvar = lp.add_var("c", std::nullopt);

    for (std::size_t gi = 0; gi < bn->size(); ++gi)
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            lp.add_row({{w[gi][ci], Rational(1)}, {xi[gi][ci], Rational(-1)}}, Rel::Ge,
                       Rational(0));
            lp.add_row({{w[gi][ci], Rational(1)}, {xi[gi][ci], Rational(1)}}, Rel::Ge,
                       Rational(0));
        }
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        std::vector<std::pair<int, Rational>> mass;
        for (std::size_t gi = 0; gi < bn->size(); ++gi) mass.emplace_back(w[gi][ci], Rational(1));
        lp.add_row(std::move(mass), Rel::Le, Rational(1));
        std::vector<std::pair<int, Rational>> sig;
        for (std::size_t gi = 0; gi < bn->size(); ++gi) sig.emplace_back(xi[gi][ci], Rational(1));
        sig.emplace_back(cvar, Rational(-1));
        lp.add_row(std::move(sig), Rel::Eq, Rational(0));
    }

    Rational eps = Rational(1) / R;
    for (std::size_t si = 0; si < S.size(); ++si) {
        auto refined = lp_refined_cells(group, space, n, cells, S[si]);
        const GroupElement s_inv = group.inverse(S[si]);
        std::vector<std::vector<int>> members(refined.size());
        for (std::size_t hi = 0; hi < bn1->size(); ++hi) {
            const auto& h = bn1->element(hi);
            auto h_in = bn->index_of(h);
            auto sih_in = bn->index_of(group.multiply(s_inv, h));
            if (!h_in && !sih_in) continue;
            for (std::size_t ri = 0; ri < refined.size(); ++ri) {
                std::vector<std::pair<int, Rational>> d;
                if (h_in) d.emplace_back(xi[*h_in][refined[ri].vc_direct], Rational(1));
                if (sih_in) d.emplace_back(xi[*sih_in][refined[ri].vc_shifted], Rational(-1));
                int u = lp.add_var("u", Rational(0));
                std::vector<std::pair<int, Rational>> rm{{u, Rational(1)}};
                for (const auto& [v, a] : d) rm.emplace_back(v, Rational(-a));
                lp.add_row(std::move(rm), Rel::Ge, Rational(0));
                std::vector<std::pair<int, Rational>> rp{{u, Rational(1)}};
                for (const auto& [v, a] : d) rp.emplace_back(v, a);
                lp.add_row(std::move(rp), Rel::Ge, Rational(0));
                members[ri].push_back(u);
            }
        }
        for (std::size_t ri = 0; ri < refined.size(); ++ri) {
            if (members[ri].empty()) continue;
            std::vector<std::pair<int, Rational>> coeffs;
            for (int u : members[ri]) coeffs.emplace_back(u, Rational(1));
            lp.add_row(std::move(coeffs), Rel::Le, eps);
        }
    }

    // objective: pair(phi, xi) as a linear form
    std::vector<std::pair<int, Rational>> form;
    if (phi.tag() == DualTag::Sigma) {
        form.emplace_back(cvar, Rational(1));
    } else {
        for (const auto& [g, cell, v] : phi.coefficients()) {
            std::size_t gi = *bn->index_of(g);
            for (std::size_t ci = 0; ci < cells.size(); ++ci)
                if (cells[ci] == cell) form.emplace_back(xi[gi][ci], v);
        }
    }

    SolveOptions so;
    so.mode = opts.mode;
    so.rule = opts.rule;
    Rational best(0);
    for (int sign = 0; sign < 2; ++sign) {
        lp.objective.clear();
        for (const auto& [v, a] : form)
            lp.objective.emplace_back(v, sign == 0 ? Rational(-a) : a);
        LpSolution sol = solve_lp(lp, so);
        if (sol.status != LpStatus::Optimal)
            throw SolverError("residual LP must be bounded and feasible");
        // each pass minimizes -(+-pair), so the attained max is -objective
        Rational got = -sol.objective;
        if (got > best) best = got;
    }
    return best;
}

std::vector<PairingRow> class_pairing(const RFunctional& phi, const std::vector<RChain>& family) {
    std::vector<PairingRow> rows;
    rows.reserve(family.size());
    int idx = 1;
    for (const auto& xi : family) {
        PairingRow row;
        row.n = idx++;
        row.value = pair(phi, xi);
        row.delta_norm = chain_defect(xi);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace amencert
