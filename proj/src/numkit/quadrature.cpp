#include <cmath>

#include "sscool/errors.hpp"
#include "sscool/numkit/quadrature.hpp"

namespace sscool::numkit {

// Newton iteration on P_n with the Chebyshev-like initial guess; weights from
// the derivative identity w_i = 2 / ((1 - x^2) P_n'(x)^2).
QuadratureRule gauss_legendre(std::size_t n) {
  if (n < 1) throw contract_error("gauss_legendre: need n >= 1");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);

  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n and P_n' by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;  // cos starts near +1; store ascending from -1
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    r.nodes[n / 2] = 0.0;
    // Recompute the central weight explicitly (x = 0).
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t k = 2; k <= n; ++k) {
      double p2 = (-(static_cast<double>(k) - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp0 = n * (0.0 * p1 - p0) / (0.0 - 1.0);
    r.weights[n / 2] = 2.0 / (dp0 * dp0);
  }
  return r;
}

}  // namespace sscool::numkit
