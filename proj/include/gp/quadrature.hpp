#pragma once

#include <cmath>

#include "gp/types.hpp"

namespace gp {

struct GaussRule {
  Vector nodes;    // on [-1, 1]
  Vector weights;
};

// Golub-Welsch rule with m points, 1 <= m <= 64
const GaussRule& gauss_legendre(int m);

// composite Gauss-Legendre on [a, b]
template <typename F>
double integrate(F&& f, double a, double b, int panels = 1, int m = 8) {
  const GaussRule& g = gauss_legendre(m);
  const double step = (b - a) / panels;
  // Neumaier summation over panels
  double total = 0.0, carry = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += g.weights[i] * f(lo + 0.5 * step * (g.nodes[i] + 1.0));
    const double term = 0.5 * step * s;
    const double t = total + term;
    carry += std::abs(total) >= std::abs(term) ? (total - t) + term : (term - t) + total;
    total = t;
  }
  return total + carry;
}

}  // namespace gp
