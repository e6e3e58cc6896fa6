#pragma once

#include <functional>

namespace cas::preint {

// Outcome of solving g(z) = 0 for a nondecreasing g. AllAbove means g > 0
// over the whole search range (threshold crossed at z = -inf); AllBelow the
// opposite.
struct RootResult {
    enum class Kind { Root, AllAbove, AllBelow };
    Kind kind = Kind::Root;
    double gamma = 0.0;

    bool is_root() const { return kind == Kind::Root; }
    static RootResult root(double g) { return {Kind::Root, g}; }
    static RootResult all_above() { return {Kind::AllAbove, 0.0}; }
    static RootResult all_below() { return {Kind::AllBelow, 0.0}; }
};

// g(z, &slope) returns the value and writes the derivative.
using MonotoneFn = std::function<double(double, double*)>;

// Newton iteration safeguarded by bisection inside a bracket that expands
// from [-12,12] to [-40,40]. Throws MonotoneContractViolation when the
// bracket endpoints have impossible sign ordering. An optional warm-start
// hint seeds the first Newton point.
RootResult find_root_monotone(const MonotoneFn& g, double tol_x, double tol_f,
                              const double* hint = nullptr);

} // namespace cas::preint
