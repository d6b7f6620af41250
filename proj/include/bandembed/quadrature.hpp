#pragma once

#include <cstddef>
#include <vector>

namespace bandembed {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule (Newton on P_n).
GaussRule gauss_legendre(std::size_t n);

/// Composite rule on [a, b] with `panels` equal panels of the given base rule.
/// Returned nodes are increasing.
GaussRule composite_rule(const GaussRule& base, double a, double b, std::size_t panels);

}  // namespace bandembed
