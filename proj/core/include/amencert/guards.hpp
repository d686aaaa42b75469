#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amencert {

/// Malformed descriptor, incompatible arguments, violated precondition.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured resource cap was exceeded; never silently truncated.
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure inside the float LP path; exact mode is the remedy.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Process-wide resource caps. Mutable only through set_guards (CLI startup);
/// workers treat them as constants.
struct Guards {
    std::size_t ball_cap = 5'000'000;      // max elements in a word-metric ball
    std::size_t lp_row_cap = 200'000;      // max rows in one LP model
    int boundary_depth_cap = 24;           // max cylinder refinement depth
};

const Guards& guards();
void set_guards(const Guards& g);

inline void check_ball_cap(std::size_t n) {
    if (n > guards().ball_cap)
        throw GuardError("ball size guard exceeded: " + std::to_string(n) + " > " +
                         std::to_string(guards().ball_cap));
}

inline void check_lp_cap(std::size_t rows) {
    if (rows > guards().lp_row_cap)
        throw GuardError("LP size guard exceeded: " + std::to_string(rows) + " rows > " +
                         std::to_string(guards().lp_row_cap));
}

inline void check_depth_cap(int depth) {
    if (depth > guards().boundary_depth_cap)
        throw GuardError("cylinder depth cap exceeded: " + std::to_string(depth) + " > " +
                         std::to_string(guards().boundary_depth_cap));
}

}  // namespace amencert
