#pragma once

#include <krod/types.hpp>

namespace krod {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    Vector points;
    Vector weights;
    [[nodiscard]] int order() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule from the Golub-Welsch eigenproblem, 1 <= n <= 16.
/// Exact for polynomials up to degree 2n-1. Throws std::invalid_argument otherwise.
[[nodiscard]] QuadratureRule gauss_rule(int n);

}  // namespace krod
