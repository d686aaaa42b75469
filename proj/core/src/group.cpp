#include "amencert/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace amencert {

// ---------------------------------------------------------------------------
// GroupElement

GroupElement GroupElement::zvec(std::vector<std::int64_t> coords) {
    GroupElement g;
    g.fam_ = Family::ZPow;
    g.vec_ = std::move(coords);
    return g;
}

GroupElement GroupElement::word(std::vector<std::int8_t> letters) {
    GroupElement g;
    g.fam_ = Family::Free;
    g.word_ = std::move(letters);
    return g;
}

GroupElement GroupElement::perm(std::vector<std::uint8_t> images) {
    GroupElement g;
    g.fam_ = Family::Perm;
    g.perm_ = std::move(images);
    return g;
}

GroupElement GroupElement::pair(GroupElement left, GroupElement right) {
    GroupElement g;
    g.fam_ = Family::Product;
    g.parts_.reserve(2);
    g.parts_.push_back(std::move(left));
    g.parts_.push_back(std::move(right));
    return g;
}

bool GroupElement::operator==(const GroupElement& o) const {
    if (fam_ != o.fam_) return false;
    switch (fam_) {
        case Family::ZPow: return vec_ == o.vec_;
        case Family::Free: return word_ == o.word_;
        case Family::Perm: return perm_ == o.perm_;
        case Family::Product: return parts_ == o.parts_;
    }
    return false;
}

bool GroupElement::lex_less(const GroupElement& o) const {
    switch (fam_) {
        case Family::ZPow: return vec_ < o.vec_;
        case Family::Free: {
            // letter order: a < A < b < B < ...; encode +i -> 2i-2, -i -> 2i-1
            auto key = [](std::int8_t l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; };
            auto a = word_.begin(), b = o.word_.begin();
            for (; a != word_.end() && b != o.word_.end(); ++a, ++b) {
                if (key(*a) != key(*b)) return key(*a) < key(*b);
            }
            return word_.size() < o.word_.size();
        }
        case Family::Perm: return perm_ < o.perm_;
        case Family::Product: {
            if (parts_[0] != o.parts_[0]) return parts_[0].lex_less(o.parts_[0]);
            return parts_[1].lex_less(o.parts_[1]);
        }
    }
    return false;
}

std::size_t GroupElement::hash() const {
    std::size_t h = static_cast<std::size_t>(fam_) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    switch (fam_) {
        case Family::ZPow:
            for (auto c : vec_) mix(static_cast<std::size_t>(c));
            break;
        case Family::Free:
            for (auto l : word_) mix(static_cast<std::size_t>(static_cast<int>(l) + 128));
            break;
        case Family::Perm:
            for (auto p : perm_) mix(p);
            break;
        case Family::Product:
            for (const auto& p : parts_) mix(p.hash());
            break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Group

struct Group::Data {
    Family fam;
    std::string spec;
    int dim = 0;   // ZPow dimension / Free rank
    std::vector<GroupElement> gens;
    std::size_t positive_count = 0;
    GroupElement id;
    std::vector<Group> factors;

    mutable std::mutex ball_mu;
    mutable std::map<int, std::shared_ptr<const Ball>> balls;
};

namespace {

std::vector<std::int8_t> reduce_concat(const std::vector<std::int8_t>& a,
                                       const std::vector<std::int8_t>& b) {
    std::vector<std::int8_t> out(a);
    for (auto l : b) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::vector<std::uint8_t> compose(const std::vector<std::uint8_t>& g,
                                  const std::vector<std::uint8_t>& h) {
    // (g h)(i) = g(h(i))
    std::vector<std::uint8_t> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[h[i]];
    return out;
}

std::vector<std::uint8_t> invert_perm(const std::vector<std::uint8_t>& p) {
    std::vector<std::uint8_t> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<std::uint8_t>(i);
    return out;
}

bool is_identity_perm(const std::vector<std::uint8_t>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

// Parses "(0 1 2)(3 4)" into an image table over {0..max_index}.
std::vector<std::uint8_t> parse_cycles(const std::string& text, int degree_hint) {
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    int max_idx = degree_hint - 1;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) { ++i; continue; }
        if (text[i] != '(') throw SpecError("expected '(' in cycle notation: " + text);
        std::size_t close = text.find(')', i);
        if (close == std::string::npos) throw SpecError("unbalanced cycle: " + text);
        std::string body = text.substr(i + 1, close - i - 1);
        std::vector<int> cyc;
        std::istringstream ss(body);
        std::string tok;
        while (ss >> tok) {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size() || v < 0) throw SpecError("bad cycle entry: " + tok);
            cyc.push_back(v);
            max_idx = std::max(max_idx, v);
        }
        cycles.push_back(std::move(cyc));
        i = close + 1;
    }
    int m = max_idx + 1;
    if (m <= 0) m = 1;
    std::vector<std::uint8_t> img(m);
    for (int j = 0; j < m; ++j) img[j] = static_cast<std::uint8_t>(j);
    std::vector<bool> moved(m, false);
    for (const auto& cyc : cycles) {
        for (std::size_t j = 0; j < cyc.size(); ++j) {
            int from = cyc[j], to = cyc[(j + 1) % cyc.size()];
            if (from >= m || moved[from])
                throw SpecError("non-bijective permutation (index repeated): " + text);
            moved[from] = true;
            img[from] = static_cast<std::uint8_t>(to);
        }
    }
    // check bijectivity
    std::vector<bool> seen(m, false);
    for (int j = 0; j < m; ++j) {
        if (seen[img[j]]) throw SpecError("non-bijective permutation: " + text);
        seen[img[j]] = true;
    }
    return img;
}

std::string print_cycles(const std::vector<std::uint8_t>& p) {
    std::string out;
    std::vector<bool> done(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (done[i] || p[i] == i) continue;
        out += '(';
        std::size_t j = i;
        bool first = true;
        do {
            if (!first) out += ' ';
            out += std::to_string(j);
            done[j] = true;
            first = false;
            j = p[j];
        } while (j != i);
        out += ')';
    }
    return out.empty() ? "()" : out;
}

// Splits "prod(a,b)" arguments at the top-level comma.
std::pair<std::string, std::string> split_prod_args(const std::string& body) {
    int depth = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) return {body.substr(0, i), body.substr(i + 1)};
    }
    throw SpecError("prod(...) needs two comma-separated group specs");
}

std::string strip(const std::string& s) {
    auto a = s.find_first_not_of(" \t");
    auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

Group Group::parse(const std::string& raw) {
    std::string spec = strip(raw);
    auto d = std::make_shared<Data>();
    d->spec = spec;

    if (spec.rfind("Z^", 0) == 0) {
        int dim = 0;
        try {
            std::size_t pos = 0;
            dim = std::stoi(spec.substr(2), &pos);
            if (pos != spec.size() - 2) throw SpecError("trailing characters");
        } catch (const std::exception&) {
            throw SpecError("malformed group spec: " + spec);
        }
        if (dim <= 0) throw SpecError("Z^d requires d >= 1, got: " + spec);
        d->fam = Family::ZPow;
        d->dim = dim;
        d->id = GroupElement::zvec(std::vector<std::int64_t>(dim, 0));
        for (int i = 0; i < dim; ++i) {
            std::vector<std::int64_t> v(dim, 0);
            v[i] = 1;
            d->gens.push_back(GroupElement::zvec(v));
        }
        d->positive_count = d->gens.size();
        for (int i = 0; i < dim; ++i) {
            std::vector<std::int64_t> v(dim, 0);
            v[i] = -1;
            d->gens.push_back(GroupElement::zvec(v));
        }
        return Group(std::move(d));
    }

    if (spec.rfind("F_", 0) == 0) {
        int k = 0;
        try {
            std::size_t pos = 0;
            k = std::stoi(spec.substr(2), &pos);
            if (pos != spec.size() - 2) throw SpecError("trailing characters");
        } catch (const std::exception&) {
            throw SpecError("malformed group spec: " + spec);
        }
        if (k <= 0) throw SpecError("F_k requires k >= 1, got: " + spec);
        if (k > 26) throw SpecError("F_k supports k <= 26 (letter names)");
        d->fam = Family::Free;
        d->dim = k;
        d->id = GroupElement::word({});
        for (int i = 1; i <= k; ++i) d->gens.push_back(GroupElement::word({static_cast<std::int8_t>(i)}));
        d->positive_count = d->gens.size();
        for (int i = 1; i <= k; ++i) d->gens.push_back(GroupElement::word({static_cast<std::int8_t>(-i)}));
        return Group(std::move(d));
    }

    if (spec.rfind("perm:[", 0) == 0) {
        if (spec.back() != ']') throw SpecError("malformed perm spec: " + spec);
        std::string body = spec.substr(6, spec.size() - 7);
        std::vector<std::string> parts;
        {
            int depth = 0;
            std::string cur;
            for (char c : body) {
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (c == ';' && depth == 0) {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            if (!strip(cur).empty()) parts.push_back(cur);
        }
        if (parts.empty()) throw SpecError("perm group needs at least one generator");
        int degree = 1;
        std::vector<std::vector<std::uint8_t>> raws;
        for (auto& p : parts) {
            auto img = parse_cycles(strip(p), degree);
            degree = std::max<int>(degree, static_cast<int>(img.size()));
            raws.push_back(std::move(img));
        }
        // pad all to common degree
        for (auto& img : raws) {
            std::size_t old = img.size();
            img.resize(degree);
            for (std::size_t j = old; j < static_cast<std::size_t>(degree); ++j)
                img[j] = static_cast<std::uint8_t>(j);
        }
        d->fam = Family::Perm;
        d->dim = degree;
        std::vector<std::uint8_t> idp(degree);
        for (int j = 0; j < degree; ++j) idp[j] = static_cast<std::uint8_t>(j);
        d->id = GroupElement::perm(idp);
        for (auto& img : raws) {
            if (is_identity_perm(img))
                throw SpecError("identity permutation is not a valid generator (S never contains e)");
            d->gens.push_back(GroupElement::perm(img));
        }
        d->positive_count = d->gens.size();
        for (auto& img : raws) {
            auto inv = invert_perm(img);
            if (inv != img) d->gens.push_back(GroupElement::perm(inv));
        }
        return Group(std::move(d));
    }

    if (spec.rfind("prod(", 0) == 0) {
        if (spec.back() != ')') throw SpecError("malformed prod spec: " + spec);
        auto [ls, rs] = split_prod_args(spec.substr(5, spec.size() - 6));
        Group l = Group::parse(strip(ls));
        Group r = Group::parse(strip(rs));
        d->fam = Family::Product;
        d->factors = {l, r};
        d->id = GroupElement::pair(l.identity(), r.identity());
        // positives of both factors first, then the remaining inverses
        for (std::size_t i = 0; i < l.positive_generator_count(); ++i)
            d->gens.push_back(GroupElement::pair(l.generators()[i], r.identity()));
        for (std::size_t i = 0; i < r.positive_generator_count(); ++i)
            d->gens.push_back(GroupElement::pair(l.identity(), r.generators()[i]));
        d->positive_count = d->gens.size();
        for (std::size_t i = l.positive_generator_count(); i < l.generators().size(); ++i)
            d->gens.push_back(GroupElement::pair(l.generators()[i], r.identity()));
        for (std::size_t i = r.positive_generator_count(); i < r.generators().size(); ++i)
            d->gens.push_back(GroupElement::pair(l.identity(), r.generators()[i]));
        return Group(std::move(d));
    }

    throw SpecError("unrecognized group spec: " + spec);
}

Family Group::family() const { return d_->fam; }
const std::string& Group::spec() const { return d_->spec; }
const std::vector<GroupElement>& Group::generators() const { return d_->gens; }
std::size_t Group::positive_generator_count() const { return d_->positive_count; }
const GroupElement& Group::identity() const { return d_->id; }
const Group& Group::left_factor() const { return d_->factors.at(0); }
const Group& Group::right_factor() const { return d_->factors.at(1); }
int Group::z_dimension() const { return d_->dim; }
int Group::free_rank() const { return d_->dim; }

bool Group::is_finite() const {
    switch (d_->fam) {
        case Family::ZPow:
        case Family::Free: return false;
        case Family::Perm: return true;
        case Family::Product:
            return d_->factors[0].is_finite() && d_->factors[1].is_finite();
    }
    return false;
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
    if (a.family() != d_->fam || b.family() != d_->fam)
        throw SpecError("family mismatch in multiply");
    switch (d_->fam) {
        case Family::ZPow: {
            if (a.coords().size() != b.coords().size())
                throw SpecError("dimension mismatch in multiply");
            std::vector<std::int64_t> v(a.coords());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.coords()[i];
            return GroupElement::zvec(std::move(v));
        }
        case Family::Free: return GroupElement::word(reduce_concat(a.letters(), b.letters()));
        case Family::Perm: return GroupElement::perm(compose(a.images(), b.images()));
        case Family::Product:
            return GroupElement::pair(d_->factors[0].multiply(a.left(), b.left()),
                                      d_->factors[1].multiply(a.right(), b.right()));
    }
    throw SpecError("unreachable");
}

GroupElement Group::inverse(const GroupElement& a) const {
    switch (d_->fam) {
        case Family::ZPow: {
            std::vector<std::int64_t> v(a.coords());
            for (auto& c : v) c = -c;
            return GroupElement::zvec(std::move(v));
        }
        case Family::Free: {
            std::vector<std::int8_t> w(a.letters().rbegin(), a.letters().rend());
            for (auto& l : w) l = static_cast<std::int8_t>(-l);
            return GroupElement::word(std::move(w));
        }
        case Family::Perm: return GroupElement::perm(invert_perm(a.images()));
        case Family::Product:
            return GroupElement::pair(d_->factors[0].inverse(a.left()),
                                      d_->factors[1].inverse(a.right()));
    }
    throw SpecError("unreachable");
}

std::string Group::to_string(const GroupElement& g) const {
    switch (d_->fam) {
        case Family::ZPow: {
            std::string out = "(";
            for (std::size_t i = 0; i < g.coords().size(); ++i) {
                if (i) out += ',';
                out += std::to_string(g.coords()[i]);
            }
            return out + ")";
        }
        case Family::Free: {
            if (g.letters().empty()) return "e";
            std::string out;
            for (auto l : g.letters())
                out += static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
            return out;
        }
        case Family::Perm: return print_cycles(g.images());
        case Family::Product:
            return "{" + d_->factors[0].to_string(g.left()) + ";" +
                   d_->factors[1].to_string(g.right()) + "}";
    }
    throw SpecError("unreachable");
}

GroupElement Group::from_string(const std::string& raw) const {
    std::string text = strip(raw);
    switch (d_->fam) {
        case Family::ZPow: {
            if (text.size() < 2 || text.front() != '(' || text.back() != ')')
                throw SpecError("malformed Z^d element: " + text);
            std::vector<std::int64_t> v;
            std::string body = text.substr(1, text.size() - 2);
            std::istringstream ss(body);
            std::string tok;
            while (std::getline(ss, tok, ',')) v.push_back(std::stoll(strip(tok)));
            if (static_cast<int>(v.size()) != d_->dim)
                throw SpecError("element has wrong dimension: " + text);
            return GroupElement::zvec(std::move(v));
        }
        case Family::Free: {
            if (text == "e" || text == "1") return d_->id;
            std::vector<std::int8_t> w;
            for (char c : text) {
                int l;
                if (c >= 'a' && c < 'a' + d_->dim)
                    l = c - 'a' + 1;
                else if (c >= 'A' && c < 'A' + d_->dim)
                    l = -(c - 'A' + 1);
                else
                    throw SpecError(std::string("bad letter '") + c + "' in word: " + text);
                w.push_back(static_cast<std::int8_t>(l));
            }
            auto reduced = reduce_concat({}, w);
            if (reduced != w) throw SpecError("word is not reduced: " + text);
            return GroupElement::word(std::move(w));
        }
        case Family::Perm: {
            if (text == "()" || text == "e") return d_->id;
            auto img = parse_cycles(text, d_->dim);
            if (static_cast<int>(img.size()) > d_->dim)
                throw SpecError("permutation exceeds group degree: " + text);
            img.resize(d_->dim);
            for (std::size_t j = img.size(); j < static_cast<std::size_t>(d_->dim); ++j)
                img[j] = static_cast<std::uint8_t>(j);
            return GroupElement::perm(std::move(img));
        }
        case Family::Product: {
            if (text.size() < 3 || text.front() != '{' || text.back() != '}')
                throw SpecError("malformed product element: " + text);
            std::string body = text.substr(1, text.size() - 2);
            int depth = 0;
            std::size_t split = std::string::npos;
            for (std::size_t i = 0; i < body.size(); ++i) {
                char c = body[i];
                if (c == '{' || c == '(') ++depth;
                if (c == '}' || c == ')') --depth;
                if (c == ';' && depth == 0) { split = i; break; }
            }
            if (split == std::string::npos) throw SpecError("malformed product element: " + text);
            return GroupElement::pair(d_->factors[0].from_string(body.substr(0, split)),
                                      d_->factors[1].from_string(body.substr(split + 1)));
        }
    }
    throw SpecError("unreachable");
}

std::string Group::generator_name(std::size_t i) const {
    if (i >= d_->positive_count) throw SpecError("generator index out of range");
    switch (d_->fam) {
        case Family::ZPow:
            if (d_->dim <= 3) {
                static const char* names[] = {"x", "y", "z"};
                return names[i];
            }
            return "x" + std::to_string(i + 1);
        case Family::Free: return std::string(1, static_cast<char>('a' + i));
        case Family::Perm: return "g" + std::to_string(i + 1);
        case Family::Product: return "s" + std::to_string(i);
    }
    throw SpecError("unreachable");
}

std::shared_ptr<const Ball> Group::ball(int n) const {
    if (n < 0) throw SpecError("ball radius must be >= 0");
    {
        std::lock_guard<std::mutex> lock(d_->ball_mu);
        auto it = d_->balls.find(n);
        if (it != d_->balls.end()) return it->second;
    }
    auto b = std::make_shared<const Ball>(*this, n);
    std::lock_guard<std::mutex> lock(d_->ball_mu);
    auto [it, inserted] = d_->balls.emplace(n, b);
    return it->second;
}

int Group::word_length(const GroupElement& g) const {
    switch (d_->fam) {
        case Family::ZPow: {
            std::int64_t n = 0;
            for (auto c : g.coords()) n += c < 0 ? -c : c;
            return static_cast<int>(n);
        }
        case Family::Free: return static_cast<int>(g.letters().size());
        case Family::Perm: {
            for (int r = 0;; ++r) {
                auto b = ball(r);
                auto idx = b->index_of(g);
                if (idx) return b->distance(*idx);
                if (r > 0 && ball(r - 1)->size() == b->size())
                    throw SpecError("element is not in the group generated by S");
            }
        }
        case Family::Product:
            return d_->factors[0].word_length(g.left()) + d_->factors[1].word_length(g.right());
    }
    throw SpecError("unreachable");
}

std::vector<GroupElement> Group::enumerate(std::size_t cap) const {
    if (!is_finite()) throw SpecError("enumerate() requires a finite group");
    std::unordered_map<GroupElement, bool, ElementHash> seen;
    std::vector<GroupElement> out{identity()};
    seen.emplace(identity(), true);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& s : generators()) {
            auto next = multiply(out[i], s);
            if (seen.emplace(next, true).second) {
                out.push_back(next);
                if (out.size() > cap)
                    throw GuardError("finite group enumeration exceeded cap " + std::to_string(cap));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ball

Ball::Ball(const Group& g, int radius) : radius_(radius) {
    std::vector<GroupElement> frontier{g.identity()};
    index_.emplace(g.identity(), 0);
    elems_.push_back(g.identity());
    dist_.push_back(0);

    std::size_t level_start = 0;
    for (int level = 1; level <= radius; ++level) {
        std::vector<GroupElement> next;
        std::size_t level_end = elems_.size();
        for (std::size_t i = level_start; i < level_end; ++i) {
            for (const auto& s : g.generators()) {
                auto e = g.multiply(elems_[i], s);
                if (index_.find(e) == index_.end()) {
                    index_.emplace(e, 0);  // placeholder, reindexed below
                    next.push_back(std::move(e));
                }
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const GroupElement& a, const GroupElement& b) { return a.lex_less(b); });
        check_ball_cap(elems_.size() + next.size());
        for (auto& e : next) {
            elems_.push_back(std::move(e));
            dist_.push_back(level);
        }
        level_start = level_end;
        if (level_end == elems_.size()) break;  // finite group exhausted
    }
    for (std::size_t i = 0; i < elems_.size(); ++i) index_[elems_[i]] = i;
}

std::optional<std::size_t> Ball::index_of(const GroupElement& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace amencert
