#include "amencert/certificates.hpp"

#include <algorithm>
#include <set>

namespace amencert {

std::vector<Cell> lp_variable_cells(const Group& group, const CompactSpace& space, int n) {
    switch (space.kind()) {
        case SpaceKind::Point: return {Cell::unit()};
        case SpaceKind::Finite: {
            std::vector<Cell> cells;
            for (std::size_t x = 0; x < space.finite_size(); ++x)
                cells.push_back(Cell::finite_point(x));
            return cells;
        }
        case SpaceKind::OnePoint: {
            std::vector<Cell> cells;
            auto b = group.ball(n + 1);
            for (const auto& g : b->elements()) cells.push_back(Cell::group_point(g));
            cells.push_back(Cell::infinity());  // the collapsed cofinite tail
            return cells;
        }
        default: throw SpecError("LP cells exist only for Point, Finite and OnePoint spaces");
    }
}

std::vector<LpRefinedCell> lp_refined_cells(const Group& group, const CompactSpace& space, int n,
                                            const std::vector<Cell>& cells, const GroupElement& s) {
    std::vector<LpRefinedCell> out;
    const GroupElement s_inv = group.inverse(s);
    switch (space.kind()) {
        case SpaceKind::Point:
            out.push_back({Cell::unit(), 0, 0});
            return out;
        case SpaceKind::Finite: {
            for (std::size_t x = 0; x < space.finite_size(); ++x)
                out.push_back({Cell::finite_point(x), x, space.act_point(s_inv, x)});
            return out;
        }
        case SpaceKind::OnePoint: {
            auto b = group.ball(n + 1);
            std::size_t tail = cells.size() - 1;
            // listed points of B_{n+1}
            for (std::size_t i = 0; i < b->size(); ++i) {
                const auto& p = b->element(i);
                auto sp_idx = b->index_of(group.multiply(s_inv, p));
                out.push_back({Cell::group_point(p), i, sp_idx ? *sp_idx : tail});
            }
            // boundary points s.q that fall outside B_{n+1}
            for (std::size_t i = 0; i < b->size(); ++i) {
                const auto& q = b->element(i);
                auto sq = group.multiply(s, q);
                if (!b->contains(sq)) out.push_back({Cell::group_point(sq), tail, i});
            }
            // the residual tail class (every other point and infinity)
            out.push_back({Cell::infinity(), tail, tail});
            return out;
        }
        default: throw SpecError("unsupported space kind for LP");
    }
}

namespace {

std::string short_cell(const CompactSpace& space, const Cell& c) { return cell_to_string(space, c); }

}  // namespace

// ---------------------------------------------------------------------------
// Folner LP

FolnerModel build_folner_model(const Group& group, const CompactSpace& space, int n,
                               PrimalVariant variant) {
    if (n < 0) throw SpecError("radius must be >= 0");
    FolnerModel fm(group, space);
    fm.radius = n;
    fm.variant = variant;
    fm.cells = lp_variable_cells(group, space, n);

    auto bn = group.ball(n);
    auto bn1 = group.ball(n + 1);
    const auto& S = group.generators();

    std::size_t projected_rows =
        fm.cells.size() + 2 * S.size() * bn1->size() * fm.cells.size() + S.size() * fm.cells.size();
    check_lp_cap(projected_rows / 2);  // coarse bound before construction

    LpModel& lp = fm.lp;
    fm.xi_var.assign(bn->size(), std::vector<int>(fm.cells.size(), -1));
    for (std::size_t gi = 0; gi < bn->size(); ++gi) {
        for (std::size_t ci = 0; ci < fm.cells.size(); ++ci) {
            std::optional<Rational> lb =
                variant == PrimalVariant::Positive ? std::optional<Rational>(Rational(0))
                                                   : std::nullopt;
            fm.xi_var[gi][ci] = lp.add_var(
                "xi[" + group.to_string(bn->element(gi)) + "," + short_cell(space, fm.cells[ci]) + "]",
                lb);
        }
    }
    fm.t_var = lp.add_var("t", Rational(0));

    // (C1) sigma(xi) = 1 on every variable cell
    fm.c1_row.resize(fm.cells.size());
    for (std::size_t ci = 0; ci < fm.cells.size(); ++ci) {
        std::vector<std::pair<int, Rational>> coeffs;
        coeffs.reserve(bn->size());
        for (std::size_t gi = 0; gi < bn->size(); ++gi)
            coeffs.emplace_back(fm.xi_var[gi][ci], Rational(1));
        fm.c1_row[ci] = static_cast<int>(lp.rows.size());
        lp.add_row(std::move(coeffs), Rel::Eq, Rational(1));
    }

    // (C2) u >= |xi - s.xi| entrywise, per refined constraint cell
    std::vector<std::vector<std::vector<int>>> c3_members(S.size());
    std::vector<std::vector<LpRefinedCell>> refined(S.size());
    for (std::size_t si = 0; si < S.size(); ++si) {
        refined[si] = lp_refined_cells(group, space, n, fm.cells, S[si]);
        c3_members[si].assign(refined[si].size(), {});
        const GroupElement s_inv = group.inverse(S[si]);
        for (std::size_t hi = 0; hi < bn1->size(); ++hi) {
            const auto& h = bn1->element(hi);
            auto h_in = bn->index_of(h);
            auto sih_in = bn->index_of(group.multiply(s_inv, h));
            if (!h_in && !sih_in) continue;  // difference identically zero
            for (std::size_t ri = 0; ri < refined[si].size(); ++ri) {
                std::vector<std::pair<int, Rational>> d;
                if (h_in) d.emplace_back(fm.xi_var[*h_in][refined[si][ri].vc_direct], Rational(1));
                if (sih_in)
                    d.emplace_back(fm.xi_var[*sih_in][refined[si][ri].vc_shifted], Rational(-1));
                int u = lp.add_var("u[" + group.to_string(S[si]) + "," + group.to_string(h) + "," +
                                       short_cell(space, refined[si][ri].rcell) + "]",
                                   Rational(0));
                // u - d >= 0
                std::vector<std::pair<int, Rational>> row_m{{u, Rational(1)}};
                for (const auto& [v, a] : d) row_m.emplace_back(v, Rational(-a));
                int rm = static_cast<int>(lp.rows.size());
                lp.add_row(std::move(row_m), Rel::Ge, Rational(0));
                // u + d >= 0
                std::vector<std::pair<int, Rational>> row_p{{u, Rational(1)}};
                for (const auto& [v, a] : d) row_p.emplace_back(v, a);
                int rp = static_cast<int>(lp.rows.size());
                lp.add_row(std::move(row_p), Rel::Ge, Rational(0));

                c3_members[si][ri].push_back(u);
                fm.u_triples.push_back({si, hi, refined[si][ri].rcell,
                                        refined[si][ri].vc_direct, u, rm, rp});
            }
        }
    }

    // (C3) column sums of u bounded by t
    for (std::size_t si = 0; si < S.size(); ++si) {
        for (std::size_t ri = 0; ri < refined[si].size(); ++ri) {
            if (c3_members[si][ri].empty()) continue;
            std::vector<std::pair<int, Rational>> coeffs;
            for (int u : c3_members[si][ri]) coeffs.emplace_back(u, Rational(1));
            coeffs.emplace_back(fm.t_var, Rational(-1));
            FolnerModel::C3Row c3{si, ri, refined[si][ri].rcell, static_cast<int>(lp.rows.size())};
            lp.add_row(std::move(coeffs), Rel::Le, Rational(0));
            fm.c3_rows.push_back(std::move(c3));
        }
    }

    lp.objective = {{fm.t_var, Rational(1)}};
    check_lp_cap(lp.rows.size());
    return fm;
}

namespace {

RChain chain_from_solution(const FolnerModel& fm, const std::vector<Rational>& primal) {
    auto bn = fm.group.ball(fm.radius);
    RChain chain(fm.group, fm.space);
    for (std::size_t gi = 0; gi < bn->size(); ++gi) {
        SpaceFn<Rational> fn;
        switch (fm.space.kind()) {
            case SpaceKind::Point:
                fn = SpaceFn<Rational>::point(primal[fm.xi_var[gi][0]]);
                break;
            case SpaceKind::Finite: {
                std::vector<Rational> vals(fm.space.finite_size());
                for (std::size_t ci = 0; ci < vals.size(); ++ci)
                    vals[ci] = primal[fm.xi_var[gi][ci]];
                fn = SpaceFn<Rational>::finite(std::move(vals));
                break;
            }
            case SpaceKind::OnePoint: {
                std::map<GroupElement, Rational, ElementLexLess> sup;
                Rational tail = primal[fm.xi_var[gi][fm.cells.size() - 1]];
                for (std::size_t ci = 0; ci + 1 < fm.cells.size(); ++ci)
                    sup.emplace(fm.cells[ci].point, primal[fm.xi_var[gi][ci]]);
                fn = SpaceFn<Rational>::one_point(std::move(sup), tail);
                break;
            }
            default: throw SpecError("unsupported space kind");
        }
        chain.add_term(bn->element(gi), std::move(fn));
    }
    return chain;
}

}  // namespace

FolnerCertificate folner_optimize(const Group& group, const CompactSpace& space, int n,
                                  const CertOptions& opts) {
    FolnerModel fm = build_folner_model(group, space, n, opts.variant);
    SolveOptions so;
    so.mode = opts.mode;
    so.rule = opts.rule;
    LpSolution sol = solve_lp(fm.lp, so);
    if (sol.status != LpStatus::Optimal)
        throw SolverError("Folner LP is feasible by construction; solver reported " +
                          std::string(lp_status_name(sol.status)));
    FolnerCertificate cert(group, space);
    cert.radius = n;
    cert.variant = opts.variant;
    cert.chain = chain_from_solution(fm, sol.primal);
    cert.defect = sol.objective;
    cert.solver = {opts.mode, sol.pivot_rule, sol.iterations, sol.exact_certified, false};
    return cert;
}

// ---------------------------------------------------------------------------
// Ponzi LP

PonziModel build_ponzi_model(const Group& group, const CompactSpace& space, int n) {
    if (space.kind() != SpaceKind::Point && space.kind() != SpaceKind::Finite)
        throw SpecError("ponzi optimization supports Point and Finite spaces");
    PonziModel pm(group, space);
    pm.radius = n;
    pm.cells = lp_variable_cells(group, space, n);

    auto bn = group.ball(n);
    auto bn1 = group.ball(n + 1);
    const auto& S = group.generators();
    LpModel& lp = pm.lp;

    pm.psi_var.assign(S.size(),
                      std::vector<std::vector<int>>(bn1->size(),
                                                    std::vector<int>(pm.cells.size(), -1)));
    pm.v_var.assign(S.size(), std::vector<int>(pm.cells.size(), -1));
    for (std::size_t si = 0; si < S.size(); ++si)
        for (std::size_t hi = 0; hi < bn1->size(); ++hi)
            for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
                pm.psi_var[si][hi][ci] =
                    lp.add_var("psi[" + group.to_string(S[si]) + "," +
                                   group.to_string(bn1->element(hi)) + "," +
                                   short_cell(space, pm.cells[ci]) + "]",
                               std::nullopt);
    for (std::size_t si = 0; si < S.size(); ++si)
        for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
            pm.v_var[si][ci] = lp.add_var(
                "v[" + group.to_string(S[si]) + "," + short_cell(space, pm.cells[ci]) + "]",
                Rational(0));

    // |psi_s(h,x)| <= v_{s,x}
    for (std::size_t si = 0; si < S.size(); ++si)
        for (std::size_t hi = 0; hi < bn1->size(); ++hi)
            for (std::size_t ci = 0; ci < pm.cells.size(); ++ci) {
                int p = pm.psi_var[si][hi][ci], v = pm.v_var[si][ci];
                lp.add_row({{v, Rational(1)}, {p, Rational(-1)}}, Rel::Ge, Rational(0));
                lp.add_row({{v, Rational(1)}, {p, Rational(1)}}, Rel::Ge, Rational(0));
            }

    // D(g,x) = sum_s [psi_s(g,x) - psi_s(sg, s.x)]
    auto d_coeffs = [&](std::size_t gi, std::size_t ci) {
        std::map<int, Rational> acc;
        const auto& g = bn->element(gi);
        for (std::size_t si = 0; si < S.size(); ++si) {
            auto hi = bn1->index_of(g);
            acc[pm.psi_var[si][*hi][ci]] += 1;
            auto sg = group.multiply(S[si], g);
            auto sgi = bn1->index_of(sg);
            std::size_t sci = ci;
            if (space.kind() == SpaceKind::Finite)
                sci = space.act_point(S[si], pm.cells[ci].index);
            acc[pm.psi_var[si][*sgi][sci]] -= 1;
        }
        return acc;
    };

    std::size_t e_index = *bn->index_of(group.identity());
    for (std::size_t ci = 0; ci < pm.cells.size(); ++ci) {
        auto de = d_coeffs(e_index, ci);
        for (std::size_t gi = 0; gi < bn->size(); ++gi) {
            if (gi == e_index) continue;
            auto dg = d_coeffs(gi, ci);
            for (const auto& [v, a] : de) dg[v] -= a;
            std::vector<std::pair<int, Rational>> coeffs;
            for (const auto& [v, a] : dg)
                if (a != 0) coeffs.emplace_back(v, a);
            lp.add_row(std::move(coeffs), Rel::Eq, Rational(0));
        }
    }
    {
        std::map<int, Rational> acc;
        for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
            for (const auto& [v, a] : d_coeffs(e_index, ci)) acc[v] += a;
        std::vector<std::pair<int, Rational>> coeffs;
        for (const auto& [v, a] : acc)
            if (a != 0) coeffs.emplace_back(v, a);
        lp.add_row(std::move(coeffs), Rel::Eq, Rational(1));
    }

    lp.objective.clear();
    for (std::size_t si = 0; si < S.size(); ++si)
        for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
            lp.objective.emplace_back(pm.v_var[si][ci], Rational(1));
    check_lp_cap(lp.rows.size());
    return pm;
}

namespace {

PonziCertificate ponzi_cert_from(const Group& group, const CompactSpace& space, int n,
                                 std::vector<RFunctional> psi, const SolverMeta& meta) {
    PonziCertificate cert(group, space);
    cert.radius = n;
    cert.psi = std::move(psi);
    Rational m(0);
    for (const auto& f : cert.psi) m += dual_norm(f);
    cert.norm_bound = m;
    if (m == 0) throw SolverError("ponzi certificate with zero norm (internal error)");
    cert.lower_bound = Rational(1) / m;
    cert.solver = meta;
    return cert;
}

}  // namespace

PonziResult ponzi_optimize(const Group& group, const CompactSpace& space, int n,
                           const CertOptions& opts) {
    PonziModel pm = build_ponzi_model(group, space, n);
    SolveOptions so;
    so.mode = opts.mode;
    so.rule = opts.rule;
    LpSolution sol = solve_lp(pm.lp, so);
    PonziResult out;
    if (sol.status == LpStatus::Infeasible) {
        out.feasible = false;
        return out;
    }
    if (sol.status != LpStatus::Optimal)
        throw SolverError("Ponzi LP reported " + std::string(lp_status_name(sol.status)));
    auto bn1 = group.ball(n + 1);
    std::vector<RFunctional> psi;
    for (std::size_t si = 0; si < group.generators().size(); ++si) {
        RFunctional f(group, space);
        for (std::size_t hi = 0; hi < bn1->size(); ++hi)
            for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
                f.add_term(bn1->element(hi), pm.cells[ci], sol.primal[pm.psi_var[si][hi][ci]]);
        psi.push_back(std::move(f));
    }
    out.feasible = true;
    out.cert = ponzi_cert_from(group, space, n, std::move(psi),
                               {opts.mode, sol.pivot_rule, sol.iterations, sol.exact_certified,
                                false});
    // at an optimum the v majorants are tight, so M equals the LP objective
    if (opts.mode == NumericMode::Exact && !(out.cert->norm_bound == sol.objective))
        throw SolverError("ponzi norm bound disagrees with LP objective (internal error)");
    return out;
}

PonziResult ponzi_from_primal_dual(const Group& group, const CompactSpace& space, int n,
                                   const CertOptions& opts) {
    if (space.kind() != SpaceKind::Point && space.kind() != SpaceKind::Finite)
        throw SpecError("ponzi optimization supports Point and Finite spaces");
    FolnerModel fm = build_folner_model(group, space, n, PrimalVariant::SignFree);
    SolveOptions so;
    so.mode = opts.mode;
    so.rule = opts.rule;
    LpSolution sol = solve_lp(fm.lp, so);
    if (sol.status != LpStatus::Optimal)
        throw SolverError("sign-free Folner LP reported " +
                          std::string(lp_status_name(sol.status)));
    PonziResult out;
    if (sol.objective == 0) {
        out.feasible = false;  // sigma is reachable by delta*; no bounded dual
        return out;
    }
    const Rational t = sol.objective;
    auto bn1 = group.ball(n + 1);
    std::vector<RFunctional> psi;
    psi.reserve(group.generators().size());
    for (std::size_t si = 0; si < group.generators().size(); ++si)
        psi.emplace_back(group, space);
    for (const auto& ut : fm.u_triples) {
        Rational p = sol.dual[ut.row_minus];
        Rational q = sol.dual[ut.row_plus];
        Rational raw = q - p;
        if (raw == 0) continue;
        // Psi_s = -(q - p) / t
        psi[ut.s].add_term(bn1->element(ut.h), fm.cells[ut.vc], Rational(-raw / t));
    }
    out.feasible = true;
    out.cert = ponzi_cert_from(group, space, n, std::move(psi),
                               {opts.mode, sol.pivot_rule, sol.iterations, sol.exact_certified,
                                false});
    if (opts.mode == NumericMode::Exact && !(out.cert->norm_bound * t == 1))
        throw SolverError("dual extraction lost strong duality (internal error)");
    return out;
}

// ---------------------------------------------------------------------------
// Verification

FolnerVerifyReport verify_folner(const FolnerCertificate& cert) {
    FolnerVerifyReport rep;
    rep.nonneg_checked = cert.variant == PrimalVariant::Positive;
    Rational worst_neg(0);
    for (const auto& e : cert.chain.entries()) {
        for_each_atom<Rational>({&e.fn}, [&worst_neg](const std::vector<Rational>& v) {
            if (v[0] < 0 && -v[0] > worst_neg) worst_neg = -v[0];
        });
    }
    rep.worst_negativity = worst_neg;

    SpaceFn<Rational> s = sigma(cert.chain);
    Rational dev(0);
    for_each_atom<Rational>({&s}, [&dev](const std::vector<Rational>& v) {
        Rational d = rat_abs(v[0] - 1);
        if (d > dev) dev = d;
    });
    rep.sigma_deviation = dev;
    rep.defect_recomputed = chain_defect(cert.chain);
    rep.defect_stored = cert.defect;
    return rep;
}

PonziVerifyReport verify_ponzi(const PonziCertificate& cert, const Rational& tol,
                               const std::vector<const FolnerCertificate*>& primals) {
    PonziVerifyReport rep;
    auto bn = cert.group.ball(cert.radius);
    RFunctional d = adjoint_coboundary(cert.psi);

    auto coeff_at = [&d](const GroupElement& g, const Cell& c) -> Rational {
        for (const auto& [a, cell, v] : d.coefficients())
            if (a == g && cell == c) return v;
        return Rational(0);
    };

    std::vector<Cell> cells = lp_variable_cells(cert.group, cert.space, cert.radius);
    Rational sum_e(0);
    std::vector<Rational> de(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        de[ci] = coeff_at(cert.group.identity(), cells[ci]);
        sum_e += de[ci];
    }
    rep.normalization_delta = rat_abs(sum_e - 1);
    Rational worst(0);
    for (std::size_t gi = 0; gi < bn->size(); ++gi) {
        const auto& g = bn->element(gi);
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
            Rational v = rat_abs(coeff_at(g, cells[ci]) - de[ci]);
            if (v > worst) worst = v;
        }
    }
    rep.constancy_violation = worst;

    Rational m(0);
    for (const auto& f : cert.psi) m += dual_norm(f);
    rep.norm_recomputed = m;
    rep.norm_stored = cert.norm_bound;

    for (const auto* p : primals) {
        if (p->radius > cert.radius) continue;
        bool ok = p->defect >= cert.lower_bound - tol;
        rep.weak_duality.emplace_back(p->radius, ok);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Tent sequence

TentSequence::TentSequence(const Group& group, const GroupElement& g1)
    : group_(group), space_(CompactSpace::one_point(group)), g1_(g1) {
    if (g1 == group.identity()) throw SpecError("tent sequence requires g1 != e");
}

Rational TentSequence::norm(int n) const {
    if (n < 1) throw SpecError("tent sequence needs n >= 1");
    // l1 mass at the point k is 2 phi_n(k); the sup is over distance classes
    Rational best(0);
    for (int dist = 0; dist <= n; ++dist) {
        Rational phi = dist >= n ? Rational(0) : frac(n - dist, n);
        if (2 * phi > best) best = 2 * phi;
    }
    return best;
}

Rational TentSequence::defect(int n) const {
    if (n < 1) throw SpecError("tent sequence needs n >= 1");
    // ||xi^n - s.xi^n|| = sup_k 2 |phi_n(k) - phi_n(s^{-1}k)|; the Cayley
    // graphs of Z^d and F_k are bipartite, so d(e, s^{-1}k) = d(e,k) +- 1.
    Rational best(0);
    auto phi = [n](int dist) {
        return dist >= n ? Rational(0) : frac(n - dist, n);
    };
    for (int dist = 0; dist <= n; ++dist) {
        Rational up = rat_abs(phi(dist) - phi(dist + 1));
        if (2 * up > best) best = 2 * up;
    }
    return best;
}

Rational TentSequence::pair_ev(int n) const {
    if (n < 1) throw SpecError("tent sequence needs n >= 1");
    // xi^n_e(x0) = phi_n(e) - phi_n(g1^{-1}) [x0 = g1^{-1}] = 1 since x0 = e != g1^{-1}
    return Rational(1);
}

RChain TentSequence::materialize(int n) const {
    if (n < 1) throw SpecError("tent sequence needs n >= 1");
    auto b = group_.ball(n - 1);
    RChain chain(group_, space_);
    for (std::size_t ki = 0; ki < b->size(); ++ki) {
        const auto& k = b->element(ki);
        Rational phi = frac(n - b->distance(ki), n);
        std::map<GroupElement, Rational, ElementLexLess> sup{{k, phi}};
        chain.add_term(k, SpaceFn<Rational>::one_point(std::move(sup), Rational(0)));
        std::map<GroupElement, Rational, ElementLexLess> sup2{{k, -phi}};
        chain.add_term(group_.multiply(k, g1_),
                       SpaceFn<Rational>::one_point(std::move(sup2), Rational(0)));
    }
    return chain;
}

// ---------------------------------------------------------------------------
// Boundary Folner chain

BoundaryFolner::BoundaryFolner(int rank, int n)
    : rank_(rank), n_(n), group_(Group::parse("F_" + std::to_string(rank))),
      space_(CompactSpace::free_boundary(group_)) {
    if (rank < 2) throw SpecError("boundary Folner chain needs rank >= 2");
    if (n < 1) throw SpecError("boundary Folner chain needs n >= 1");
}

namespace {

// the reduced prefix word of length len of (first then canonical continuation)
std::vector<std::int8_t> representative_word(std::int8_t first, int len) {
    std::vector<std::int8_t> w{first};
    while (static_cast<int>(w.size()) < len) w.push_back(canonical_next_letter(w.back()));
    return w;
}

std::vector<std::int8_t> reduce_word(std::vector<std::int8_t> a,
                                     const std::vector<std::int8_t>& b) {
    for (auto l : b) {
        if (!a.empty() && a.back() == -l)
            a.pop_back();
        else
            a.push_back(l);
    }
    return a;
}

}  // namespace

Rational BoundaryFolner::sigma_value() const {
    // every boundary point has exactly n prefixes of lengths 1..n
    Rational v(0);
    for (int len = 1; len <= n_; ++len) v += frac(1, n_);
    return v;
}

Rational BoundaryFolner::norm() const {
    // entries are nonnegative, so the column l1 mass equals sigma
    return sigma_value();
}

Rational BoundaryFolner::defect() const {
    // sup over boundary points of sum_h |xi_h(w) - xi_{s^{-1}h}(s^{-1}w)|,
    // evaluated per (generator, first letter) class; the sums depend only on
    // prefix membership, which is constant on each class.
    Rational best(0);
    for (const auto& s : group_.generators()) {
        std::int8_t sl = s.letters()[0];
        for (int r = 0; r < 2 * rank_; ++r) {
            std::int8_t first = letter_from_rank(r);
            auto omega = representative_word(first, n_ + 2);
            auto s_inv_omega = reduce_word({static_cast<std::int8_t>(-sl)}, omega);

            std::set<std::vector<std::int8_t>> A, B;
            for (int len = 1; len <= n_; ++len)
                A.insert(std::vector<std::int8_t>(omega.begin(), omega.begin() + len));
            for (int len = 1; len <= n_ && len <= static_cast<int>(s_inv_omega.size()); ++len) {
                std::vector<std::int8_t> p(s_inv_omega.begin(), s_inv_omega.begin() + len);
                B.insert(reduce_word({sl}, p));
            }
            std::set<std::vector<std::int8_t>> all(A);
            all.insert(B.begin(), B.end());
            Rational sum(0);
            for (const auto& h : all) {
                Rational va = A.count(h) ? frac(1, n_) : Rational(0);
                Rational vb = B.count(h) ? frac(1, n_) : Rational(0);
                sum += rat_abs(va - vb);
            }
            if (sum > best) best = sum;
        }
    }
    return best;
}

RChain BoundaryFolner::materialize() const {
    auto b = group_.ball(n_);
    RChain chain(group_, space_);
    for (std::size_t gi = 0; gi < b->size(); ++gi) {
        if (b->distance(gi) == 0) continue;
        const auto& g = b->element(gi);
        auto ind = CylinderFn<Rational>::indicator(rank_, g.letters());
        chain.add_term(g, SpaceFn<Rational>::boundary(
                              ind.map([this](const Rational& v) -> Rational {
                                  return Rational(v / n_);
                              })));
    }
    return chain;
}

FolnerCertificate BoundaryFolner::certificate(int rank, int n, bool materialize_chain) {
    BoundaryFolner bf(rank, n);
    FolnerCertificate cert(bf.group(), bf.space());
    cert.radius = n;
    cert.variant = PrimalVariant::Positive;
    cert.defect = bf.defect();
    cert.solver.mode = NumericMode::Exact;
    cert.solver.construction = true;
    cert.solver.exact_certified = true;
    if (materialize_chain) cert.chain = bf.materialize();
    return cert;
}

FolnerVerifyReport verify_boundary_folner(int rank, int n, const Rational& stored_defect) {
    BoundaryFolner bf(rank, n);
    FolnerVerifyReport rep;
    rep.nonneg_checked = true;
    rep.worst_negativity = Rational(0);  // entries are 1/n indicators
    rep.sigma_deviation = rat_abs(bf.sigma_value() - 1);
    rep.defect_recomputed = bf.defect();
    rep.defect_stored = stored_defect;
    return rep;
}

// ---------------------------------------------------------------------------
// Functoriality

RChain pullback_chain(const EquivariantMap& f, const RChain& eta) {
    auto rep = check_equivariant(f);
    if (!rep.equivariant) throw SpecError("pullback requires an equivariant map");
    if (!(eta.space() == f.target)) throw SpecError("chain does not live on the map's target");
    RChain out(eta.group(), f.source);
    for (const auto& e : eta.entries()) {
        std::vector<Rational> vals(f.source.finite_size());
        for (std::size_t x = 0; x < vals.size(); ++x) vals[x] = e.fn.values[f.table[x]];
        out.add_term(e.g, SpaceFn<Rational>::finite(std::move(vals)));
    }
    return out;
}

TransferMap::TransferMap(EquivariantMap map) : f(std::move(map)) {
    auto rep = check_equivariant(f);
    if (!rep.equivariant) throw SpecError("transfer requires an equivariant map");
    if (!rep.surjective) throw SpecError("transfer requires a surjective map");
}

RChain transfer_chain(const TransferMap& mu, const RChain& xi) {
    if (!(xi.space() == mu.f.source)) throw SpecError("chain does not live on the map's source");
    std::vector<std::vector<std::size_t>> fibers(mu.f.target.finite_size());
    for (std::size_t x = 0; x < mu.f.table.size(); ++x) fibers[mu.f.table[x]].push_back(x);
    RChain out(xi.group(), mu.f.target);
    for (const auto& e : xi.entries()) {
        std::vector<Rational> vals(mu.f.target.finite_size());
        for (std::size_t y = 0; y < vals.size(); ++y) {
            Rational acc(0);
            for (auto x : fibers[y]) acc += e.fn.values[x];
            vals[y] = acc / Rational(static_cast<long>(fibers[y].size()));
        }
        out.add_term(e.g, SpaceFn<Rational>::finite(std::move(vals)));
    }
    return out;
}

Rational approximate_mean(const FolnerCertificate& cert, const RFunctional& phi) {
    // float-mode chains satisfy sigma = 1 only to solver tolerance
    Rational tol = cert.solver.mode == NumericMode::Float ? frac(1, 10'000'000) : Rational(0);
    return pair(phi, cert.chain, tol);
}

}  // namespace amencert
