#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "amencert/guards.hpp"

namespace amencert {

enum class Family { ZPow, Free, Perm, Product };

/// One group element in canonical form. Equality of elements is equality of
/// canonical forms; free-group words are always reduced, permutations are
/// image tables, products hold one canonical element per factor.
class GroupElement {
public:
    GroupElement() = default;

    static GroupElement zvec(std::vector<std::int64_t> coords);
    static GroupElement word(std::vector<std::int8_t> letters);  // +i / -i, 1-based
    static GroupElement perm(std::vector<std::uint8_t> images);
    static GroupElement pair(GroupElement left, GroupElement right);

    Family family() const { return fam_; }
    const std::vector<std::int64_t>& coords() const { return vec_; }
    const std::vector<std::int8_t>& letters() const { return word_; }
    const std::vector<std::uint8_t>& images() const { return perm_; }
    const GroupElement& left() const { return parts_[0]; }
    const GroupElement& right() const { return parts_[1]; }

    bool operator==(const GroupElement& o) const;
    bool operator!=(const GroupElement& o) const { return !(*this == o); }
    /// Lexicographic order on canonical forms; callers pair it with word
    /// length for the (length, lex) ball order.
    bool lex_less(const GroupElement& o) const;

    std::size_t hash() const;

private:
    Family fam_ = Family::ZPow;
    std::vector<std::int64_t> vec_;
    std::vector<std::int8_t> word_;
    std::vector<std::uint8_t> perm_;
    std::vector<GroupElement> parts_;
};

struct ElementHash {
    std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

class Ball;

/// A finitely generated group from the built-in families, with its symmetric
/// generating set S (positive generators first, then the non-involutive
/// inverses) and cached word-metric balls.
class Group {
public:
    /// Descriptor grammar: Z^<d> | F_<k> | perm:[<cycles>;...] | prod(<spec>,<spec>)
    static Group parse(const std::string& spec);

    Family family() const;
    const std::string& spec() const;
    const std::vector<GroupElement>& generators() const;  // S = S^{-1}, ordered
    std::size_t positive_generator_count() const;
    const GroupElement& identity() const;
    bool is_finite() const;

    GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& a) const;

    std::string to_string(const GroupElement& g) const;
    GroupElement from_string(const std::string& text) const;

    /// Name of the i-th positive generator as used by space descriptors
    /// ("x,y,z" for Z^d, letters for F_k, "g1.." for permutation groups;
    /// "s<i>" is always accepted as an alias).
    std::string generator_name(std::size_t i) const;

    /// Word-metric ball of radius n; memoized, safe for concurrent callers.
    std::shared_ptr<const Ball> ball(int n) const;

    /// d(e, g). Closed-form for Z^d (l1 norm), free groups (reduced length)
    /// and products (sum of factor lengths); ball search for permutations.
    int word_length(const GroupElement& g) const;

    /// All elements of a finite group (BFS closure). Throws for infinite
    /// families or when the enumeration exceeds `cap`.
    std::vector<GroupElement> enumerate(std::size_t cap = 2000) const;

    bool operator==(const Group& o) const { return spec() == o.spec(); }

    // Product access (Family::Product only).
    const Group& left_factor() const;
    const Group& right_factor() const;

    int z_dimension() const;  // ZPow
    int free_rank() const;    // Free

private:
    struct Data;
    std::shared_ptr<const Data> d_;
    explicit Group(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
};

/// Elements at word distance <= n from the identity, in (length, lex) order.
class Ball {
public:
    Ball(const Group& g, int radius);

    int radius() const { return radius_; }
    std::size_t size() const { return elems_.size(); }
    const std::vector<GroupElement>& elements() const { return elems_; }
    const GroupElement& element(std::size_t i) const { return elems_[i]; }

    std::optional<std::size_t> index_of(const GroupElement& g) const;
    bool contains(const GroupElement& g) const { return index_of(g).has_value(); }
    int distance(std::size_t index) const { return dist_[index]; }

private:
    int radius_;
    std::vector<GroupElement> elems_;
    std::vector<int> dist_;
    std::unordered_map<GroupElement, std::size_t, ElementHash> index_;
};

}  // namespace amencert
