#include "amencert/space.hpp"

#include <sstream>
#include <unordered_map>

namespace amencert {

namespace {

std::vector<std::uint8_t> compose(const std::vector<std::uint8_t>& g,
                                  const std::vector<std::uint8_t>& h) {
    std::vector<std::uint8_t> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[h[i]];
    return out;
}

std::vector<std::uint8_t> invert_perm(const std::vector<std::uint8_t>& p) {
    std::vector<std::uint8_t> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<std::uint8_t>(i);
    return out;
}

std::vector<std::uint8_t> identity_perm(std::size_t m) {
    std::vector<std::uint8_t> p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<std::uint8_t>(i);
    return p;
}

std::vector<std::uint8_t> pow_perm(std::vector<std::uint8_t> base, std::int64_t e) {
    std::size_t m = base.size();
    if (e < 0) {
        base = invert_perm(base);
        e = -e;
    }
    auto acc = identity_perm(m);
    while (e > 0) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

bool commute(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return compose(a, b) == compose(b, a);
}

std::string strip(const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::uint8_t> parse_cycles_sized(const std::string& text, std::size_t m) {
    // Same cycle grammar as group descriptors, padded/validated to degree m.
    std::vector<std::uint8_t> img = identity_perm(m);
    std::vector<bool> moved(m, false);
    std::size_t i = 0;
    std::string t = strip(text);
    if (t == "()" || t == "e") return img;
    while (i < t.size()) {
        if (std::isspace(static_cast<unsigned char>(t[i]))) { ++i; continue; }
        if (t[i] != '(') throw SpecError("expected '(' in cycle notation: " + t);
        std::size_t close = t.find(')', i);
        if (close == std::string::npos) throw SpecError("unbalanced cycle: " + t);
        std::istringstream ss(t.substr(i + 1, close - i - 1));
        std::vector<std::size_t> cyc;
        std::string tok;
        while (ss >> tok) {
            std::size_t pos = 0;
            long v = std::stol(tok, &pos);
            if (pos != tok.size() || v < 0 || static_cast<std::size_t>(v) >= m)
                throw SpecError("cycle entry out of range [0," + std::to_string(m) + "): " + tok);
            cyc.push_back(static_cast<std::size_t>(v));
        }
        for (std::size_t j = 0; j < cyc.size(); ++j) {
            std::size_t from = cyc[j], to = cyc[(j + 1) % cyc.size()];
            if (moved[from]) throw SpecError("non-bijective permutation: " + t);
            moved[from] = true;
            img[from] = static_cast<std::uint8_t>(to);
        }
        i = close + 1;
    }
    return img;
}

}  // namespace

// ---------------------------------------------------------------------------
// Action resolver: evaluates the permutation of an arbitrary group element on
// a Finite space, mirroring the group's recursive family structure.

struct ActionNode {
    Family fam;
    std::size_t space_size = 0;
    std::vector<std::vector<std::uint8_t>> pos_perms;  // per positive generator
    std::unordered_map<GroupElement, std::vector<std::uint8_t>, ElementHash> table;  // Perm fam
    std::unique_ptr<ActionNode> left, right;

    std::vector<std::uint8_t> permutation_of(const Group& g, const GroupElement& el) const {
        switch (fam) {
            case Family::ZPow: {
                auto acc = identity_perm(space_size);
                for (std::size_t i = 0; i < el.coords().size(); ++i)
                    if (el.coords()[i] != 0)
                        acc = compose(acc, pow_perm(pos_perms[i], el.coords()[i]));
                return acc;
            }
            case Family::Free: {
                auto acc = identity_perm(space_size);
                for (auto l : el.letters()) {
                    const auto& base = pos_perms[(l > 0 ? l : -l) - 1];
                    acc = compose(acc, l > 0 ? base : invert_perm(base));
                }
                return acc;
            }
            case Family::Perm: {
                auto it = table.find(el);
                if (it == table.end())
                    throw SpecError("element not in the validated finite action table");
                return it->second;
            }
            case Family::Product:
                return compose(left->permutation_of(g.left_factor(), el.left()),
                               right->permutation_of(g.right_factor(), el.right()));
        }
        throw SpecError("unreachable");
    }

    void validate(const Group& g) {
        switch (fam) {
            case Family::ZPow:
                for (std::size_t i = 0; i < pos_perms.size(); ++i)
                    for (std::size_t j = i + 1; j < pos_perms.size(); ++j)
                        if (!commute(pos_perms[i], pos_perms[j]))
                            throw SpecError("permutations do not commute; Z^d relations violated");
                break;
            case Family::Free:
                break;  // no relations
            case Family::Perm: {
                // Build the full homomorphism table by BFS; any inconsistency
                // is a relation violation.
                table.clear();
                std::vector<GroupElement> order{g.identity()};
                table.emplace(g.identity(), identity_perm(space_size));
                for (std::size_t i = 0; i < order.size(); ++i) {
                    for (std::size_t si = 0; si < g.generators().size(); ++si) {
                        const auto& s = g.generators()[si];
                        auto next = g.multiply(order[i], s);
                        auto img = compose(table[order[i]], generator_perm(si, g));
                        auto it = table.find(next);
                        if (it == table.end()) {
                            table.emplace(next, img);
                            order.push_back(next);
                            if (order.size() > 2000)
                                throw GuardError("finite action validation cap exceeded");
                        } else if (it->second != img) {
                            throw SpecError(
                                "permutations violate the group's defining relations");
                        }
                    }
                }
                break;
            }
            case Family::Product: {
                left->validate(g.left_factor());
                right->validate(g.right_factor());
                for (const auto& a : left->pos_perms)
                    for (const auto& b : right->pos_perms)
                        if (!commute(a, b))
                            throw SpecError(
                                "factor actions do not commute; product relations violated");
                break;
            }
        }
    }

    std::vector<std::uint8_t> generator_perm(std::size_t s_index, const Group& g) const {
        // permutation of the s_index-th element of S (positives then inverses)
        std::size_t pc = g.positive_generator_count();
        if (fam == Family::Product) {
            // S order: pos(L), pos(R), inv(L), inv(R)
            std::size_t lp = g.left_factor().positive_generator_count();
            std::size_t rp = g.right_factor().positive_generator_count();
            std::size_t li = g.left_factor().generators().size() - lp;   // left inverses
            if (s_index < lp) return left->generator_perm(s_index, g.left_factor());
            if (s_index < lp + rp) return right->generator_perm(s_index - lp, g.right_factor());
            if (s_index < lp + rp + li)
                return left->generator_perm(s_index - rp, g.left_factor());
            return right->generator_perm(s_index - lp - li, g.right_factor());
        }
        if (s_index < pc) return pos_perms[s_index];
        // inverse generators: for Perm family they may be deduplicated, so
        // find which positive generator this inverts.
        const auto& s = g.generators()[s_index];
        for (std::size_t i = 0; i < pc; ++i)
            if (g.inverse(g.generators()[i]) == s) return invert_perm(pos_perms[i]);
        throw SpecError("generator not matched to a positive generator");
    }
};

// ---------------------------------------------------------------------------
// CompactSpace

struct CompactSpace::Data {
    SpaceKind kind;
    Group group;
    std::string spec;
    std::size_t finite_size = 0;
    std::unique_ptr<ActionNode> action;  // Finite only

    Data(SpaceKind k, Group g, std::string s) : kind(k), group(std::move(g)), spec(std::move(s)) {}
};

CompactSpace CompactSpace::point(const Group& g) {
    return CompactSpace(std::make_shared<Data>(SpaceKind::Point, g, "point"));
}

CompactSpace CompactSpace::one_point(const Group& g) {
    if (g.family() != Family::ZPow && g.family() != Family::Free)
        throw SpecError("onepoint requires an infinite family (Z^d or F_k)");
    return CompactSpace(std::make_shared<Data>(SpaceKind::OnePoint, g, "onepoint"));
}

CompactSpace CompactSpace::free_boundary(const Group& g) {
    if (g.family() != Family::Free)
        throw SpecError("boundary requires a free group F_k");
    return CompactSpace(std::make_shared<Data>(SpaceKind::FreeBoundary, g, "boundary"));
}

namespace {

std::unique_ptr<ActionNode> build_action_node(const Group& g, std::size_t m,
                                              const std::vector<std::vector<std::uint8_t>>& perms,
                                              std::size_t offset) {
    auto node = std::make_unique<ActionNode>();
    node->fam = g.family();
    node->space_size = m;
    if (g.family() == Family::Product) {
        std::size_t lp = g.left_factor().positive_generator_count();
        std::size_t rp = g.right_factor().positive_generator_count();
        std::vector<std::vector<std::uint8_t>> lperms(perms.begin() + offset,
                                                      perms.begin() + offset + lp);
        std::vector<std::vector<std::uint8_t>> rperms(perms.begin() + offset + lp,
                                                      perms.begin() + offset + lp + rp);
        node->left = build_action_node(g.left_factor(), m, lperms, 0);
        node->right = build_action_node(g.right_factor(), m, rperms, 0);
        node->pos_perms.clear();
        for (auto& p : lperms) node->pos_perms.push_back(p);
        for (auto& p : rperms) node->pos_perms.push_back(p);
    } else {
        node->pos_perms.assign(perms.begin() + offset, perms.end());
    }
    return node;
}

}  // namespace

CompactSpace CompactSpace::finite(const Group& g,
                                  std::vector<std::vector<std::uint8_t>> positive_gen_perms) {
    if (positive_gen_perms.size() != g.positive_generator_count())
        throw SpecError("finite space needs one permutation per positive generator");
    if (positive_gen_perms.empty()) throw SpecError("finite space needs at least one generator");
    std::size_t m = positive_gen_perms[0].size();
    if (m == 0) throw SpecError("finite space must be nonempty");
    for (const auto& p : positive_gen_perms) {
        if (p.size() != m) throw SpecError("finite-space permutations disagree on size");
        std::vector<bool> seen(m, false);
        for (auto v : p) {
            if (v >= m || seen[v]) throw SpecError("finite-space map is not a bijection");
            seen[v] = true;
        }
    }
    std::string spec = "finite:";
    for (std::size_t i = 0; i < positive_gen_perms.size(); ++i) {
        if (i) spec += ";";
        spec += g.generator_name(i) + "->" + [&] {
            // inline cycle printer
            const auto& p = positive_gen_perms[i];
            std::string out;
            std::vector<bool> done(p.size(), false);
            for (std::size_t a = 0; a < p.size(); ++a) {
                if (done[a] || p[a] == a) continue;
                out += '(';
                std::size_t j = a;
                bool first = true;
                do {
                    if (!first) out += ' ';
                    out += std::to_string(j);
                    done[j] = true;
                    first = false;
                    j = p[j];
                } while (j != a);
                out += ')';
            }
            return out.empty() ? std::string("()") : out;
        }();
    }
    auto d = std::make_shared<Data>(SpaceKind::Finite, g, spec);
    d->finite_size = m;
    d->action = build_action_node(g, m, positive_gen_perms, 0);
    d->action->validate(g);
    return CompactSpace(std::move(d));
}

CompactSpace CompactSpace::parse(const Group& g, const std::string& raw) {
    std::string spec = strip(raw);
    if (spec == "point") return point(g);
    if (spec == "onepoint") return one_point(g);
    if (spec == "boundary") return free_boundary(g);
    if (spec.rfind("finite:", 0) == 0) {
        std::string body = spec.substr(7);
        std::vector<std::pair<std::string, std::string>> assigns;
        {
            int depth = 0;
            std::string cur;
            auto flush = [&] {
                if (strip(cur).empty()) return;
                std::string item = strip(cur);
                std::size_t arrow = item.find("->");
                std::size_t alen = 2;
                if (arrow == std::string::npos) {
                    arrow = item.find("↦");  // ↦
                    alen = std::string("↦").size();
                }
                if (arrow == std::string::npos)
                    throw SpecError("finite space assignment needs '->': " + item);
                assigns.emplace_back(strip(item.substr(0, arrow)), strip(item.substr(arrow + alen)));
                cur.clear();
            };
            for (char c : body) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if ((c == ';' || c == ',') && depth == 0)
                    flush();
                else
                    cur += c;
            }
            flush();
        }
        if (assigns.empty()) throw SpecError("finite space needs generator assignments");
        // determine degree: max index mentioned + 1
        std::size_t m = 1;
        for (const auto& [name, cyc] : assigns) {
            std::istringstream ss(cyc);
            std::string tok;
            char c;
            while (ss.get(c)) {
                if (std::isdigit(static_cast<unsigned char>(c))) {
                    std::string num(1, c);
                    while (ss.get(c) && std::isdigit(static_cast<unsigned char>(c))) num += c;
                    m = std::max<std::size_t>(m, std::stoul(num) + 1);
                }
            }
        }
        std::size_t pc = g.positive_generator_count();
        std::vector<std::vector<std::uint8_t>> perms(pc);
        std::vector<bool> assigned(pc, false);
        for (const auto& [name, cyc] : assigns) {
            std::size_t idx = pc;
            for (std::size_t i = 0; i < pc; ++i) {
                if (name == g.generator_name(i) || name == "s" + std::to_string(i)) {
                    idx = i;
                    break;
                }
            }
            if (idx == pc) throw SpecError("unknown generator name in space spec: " + name);
            if (assigned[idx]) throw SpecError("generator assigned twice: " + name);
            assigned[idx] = true;
            perms[idx] = parse_cycles_sized(cyc, m);
        }
        for (std::size_t i = 0; i < pc; ++i)
            if (!assigned[i])
                throw SpecError("generator " + g.generator_name(i) + " missing from space spec");
        return finite(g, std::move(perms));
    }
    throw SpecError("unrecognized space spec: " + spec);
}

SpaceKind CompactSpace::kind() const { return d_->kind; }
const Group& CompactSpace::group() const { return d_->group; }
const std::string& CompactSpace::spec() const { return d_->spec; }

std::size_t CompactSpace::finite_size() const {
    if (d_->kind != SpaceKind::Finite) throw SpecError("finite_size on non-finite space");
    return d_->finite_size;
}

int CompactSpace::boundary_rank() const {
    if (d_->kind != SpaceKind::FreeBoundary) throw SpecError("boundary_rank on non-boundary space");
    return d_->group.free_rank();
}

std::size_t CompactSpace::act_point(const GroupElement& g, std::size_t x) const {
    return permutation_of(g)[x];
}

std::vector<std::uint8_t> CompactSpace::permutation_of(const GroupElement& g) const {
    if (d_->kind != SpaceKind::Finite) throw SpecError("permutation_of on non-finite space");
    return d_->action->permutation_of(d_->group, g);
}

bool CompactSpace::operator==(const CompactSpace& o) const {
    return d_->kind == o.d_->kind && d_->group == o.d_->group && d_->spec == o.d_->spec;
}

// ---------------------------------------------------------------------------
// Cells

Cell act_cell(const CompactSpace& space, const GroupElement& g, const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::Unit: return cell;
        case Cell::Kind::Infinity: return cell;
        case Cell::Kind::FinitePoint:
            return Cell::finite_point(space.act_point(g, cell.index));
        case Cell::Kind::GroupPoint:
            return Cell::group_point(space.group().multiply(g, cell.point));
        case Cell::Kind::Cylinder: {
            // Emit enough of the canonical boundary point, act, renormalize.
            std::vector<std::int8_t> seq = cell.word;
            std::int8_t prev = seq.empty() ? 0 : seq.back();
            std::size_t want = cell.word.size() + g.letters().size() + 2;
            while (seq.size() < want) {
                prev = canonical_next_letter(prev);
                seq.push_back(prev);
            }
            std::vector<std::int8_t> out(g.letters());
            for (auto l : seq) {
                if (!out.empty() && out.back() == -l)
                    out.pop_back();
                else
                    out.push_back(l);
            }
            return Cell::cylinder(std::move(out));
        }
    }
    throw SpecError("unreachable");
}

std::string cell_to_string(const CompactSpace& space, const Cell& cell) {
    switch (cell.kind) {
        case Cell::Kind::Unit: return "*";
        case Cell::Kind::FinitePoint: return std::to_string(cell.index);
        case Cell::Kind::GroupPoint: return space.group().to_string(cell.point);
        case Cell::Kind::Infinity: return "inf";
        case Cell::Kind::Cylinder: return letters_to_string(cell.word);
    }
    throw SpecError("unreachable");
}

Cell cell_from_string(const CompactSpace& space, const std::string& text) {
    switch (space.kind()) {
        case SpaceKind::Point:
            if (text != "*") throw SpecError("point-space cell must be '*': " + text);
            return Cell::unit();
        case SpaceKind::Finite: {
            std::size_t pos = 0;
            std::size_t idx = std::stoul(text, &pos);
            if (pos != text.size() || idx >= space.finite_size())
                throw SpecError("bad finite-space cell: " + text);
            return Cell::finite_point(idx);
        }
        case SpaceKind::OnePoint:
            if (text == "inf") return Cell::infinity();
            return Cell::group_point(space.group().from_string(text));
        case SpaceKind::FreeBoundary:
            return Cell::cylinder(letters_from_string(text, space.boundary_rank()));
    }
    throw SpecError("unreachable");
}

// ---------------------------------------------------------------------------
// Equivariant maps

EquivariantMap::EquivariantMap(CompactSpace src, CompactSpace tgt, std::vector<std::size_t> tbl)
    : source(std::move(src)), target(std::move(tgt)), table(std::move(tbl)) {
    if (source.kind() != SpaceKind::Finite || target.kind() != SpaceKind::Finite)
        throw SpecError("equivariant maps are supported between Finite spaces");
    if (!(source.group() == target.group()))
        throw SpecError("equivariant map requires both spaces over the same group");
    if (table.size() != source.finite_size())
        throw SpecError("map table size must equal the source space size");
    for (auto v : table)
        if (v >= target.finite_size()) throw SpecError("map value out of target range");
}

EquivarianceReport check_equivariant(const EquivariantMap& f) {
    EquivarianceReport rep;
    rep.equivariant = true;
    rep.fiber_sizes.assign(f.target.finite_size(), 0);
    for (auto v : f.table) rep.fiber_sizes[v] += 1;
    rep.surjective = std::all_of(rep.fiber_sizes.begin(), rep.fiber_sizes.end(),
                                 [](std::size_t n) { return n > 0; });
    const auto& gens = f.source.group().generators();
    for (std::size_t si = 0; si < gens.size(); ++si) {
        for (std::size_t x = 0; x < f.table.size(); ++x) {
            std::size_t lhs = f.table[f.source.act_point(gens[si], x)];
            std::size_t rhs = f.target.act_point(gens[si], f.table[x]);
            if (lhs != rhs) {
                rep.equivariant = false;
                rep.violations.push_back("f(s.x) != s.f(x) at s=" +
                                         f.source.group().to_string(gens[si]) +
                                         ", x=" + std::to_string(x));
            }
        }
    }
    return rep;
}

}  // namespace amencert
