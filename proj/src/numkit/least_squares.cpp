#include <cmath>

#include "sscool/errors.hpp"
#include "sscool/numkit/least_squares.hpp"
#include "sscool/numkit/linalg.hpp"

namespace sscool::numkit {

namespace {

double sq_norm(const std::vector<double>& r) {
  double s = 0;
  for (double v : r) s += v * v;
  return s;
}

}  // namespace

LeastSquaresResult least_squares(const ModelFn& model, std::optional<JacobianFn> jacobian,
                                 std::vector<double> p, const std::vector<double>& obs,
                                 std::size_t max_iter) {
  const std::size_t np = p.size();
  if (obs.size() < np) throw contract_error("least_squares: fewer observations than parameters");
  for (double v : p)
    if (!std::isfinite(v)) throw contract_error("least_squares: non-finite initial parameter");

  auto residual = [&](const std::vector<double>& q) {
    std::vector<double> r = model(q);
    if (r.size() != obs.size()) throw contract_error("least_squares: model size mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= obs[i];
    return r;
  };

  auto fd_jacobian = [&](const std::vector<double>& q, const std::vector<double>& r0) {
    std::vector<std::vector<double>> J(obs.size(), std::vector<double>(np));
    for (std::size_t j = 0; j < np; ++j) {
      const double step = std::sqrt(1e-16) * std::max(std::abs(q[j]), 1.0);
      std::vector<double> qj = q;
      qj[j] += step;
      std::vector<double> rj = residual(qj);
      for (std::size_t i = 0; i < obs.size(); ++i) J[i][j] = (rj[i] - r0[i]) / step;
    }
    return J;
  };

  LeastSquaresResult out;
  out.low_curvature.assign(np, false);

  std::vector<double> r = residual(p);
  double cost = sq_norm(r);
  double lambda = 1e-3;

  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    std::vector<std::vector<double>> J =
        jacobian ? (*jacobian)(p) : fd_jacobian(p, r);

    // Normal equations JtJ + lambda diag(JtJ).
    std::vector<double> jtj(np * np, 0.0), jtr(np, 0.0);
    for (std::size_t i = 0; i < obs.size(); ++i)
      for (std::size_t a = 0; a < np; ++a) {
        jtr[a] += J[i][a] * r[i];
        for (std::size_t b = a; b < np; ++b) jtj[a * np + b] += J[i][a] * J[i][b];
      }
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = 0; b < a; ++b) jtj[a * np + b] = jtj[b * np + a];

    double gnorm = 0, max_diag = 0;
    for (std::size_t a = 0; a < np; ++a) {
      gnorm = std::max(gnorm, std::abs(jtr[a]));
      max_diag = std::max(max_diag, jtj[a * np + a]);
    }
    for (std::size_t a = 0; a < np; ++a)
      if (jtj[a * np + a] <= 1e-14 * std::max(max_diag, 1e-300)) out.low_curvature[a] = true;

    if (gnorm < 1e-10) {
      out.converged = true;
      break;
    }

    bool stepped = false;
    while (lambda < 1e12) {
      std::vector<double> lhs = jtj;
      for (std::size_t a = 0; a < np; ++a) {
        const double d = jtj[a * np + a];
        // Floor keeps the damped system solvable when a column of J vanishes.
        lhs[a * np + a] += lambda * (d > 0 ? d : std::max(max_diag, 1.0) * 1e-12);
      }
      std::vector<double> delta(jtr);
      for (double& v : delta) v = -v;
      std::vector<double> lhs_copy = lhs;
      if (!detail::lu_solve(lhs_copy, np, delta)) {
        lambda *= 10;
        continue;
      }
      std::vector<double> pn(np);
      bool finite_step = true;
      for (std::size_t a = 0; a < np; ++a) {
        pn[a] = p[a] + delta[a];
        if (!std::isfinite(pn[a])) finite_step = false;
      }
      if (finite_step) {
        std::vector<double> rn = residual(pn);
        const double cn = sq_norm(rn);
        if (std::isfinite(cn) && cn <= cost) {
          const double rel_drop = (cost - cn) / std::max(cost, 1e-300);
          p = std::move(pn);
          r = std::move(rn);
          cost = cn;
          lambda = std::max(lambda / 3.0, 1e-12);
          stepped = true;
          if (rel_drop < 1e-12) out.converged = true;
          break;
        }
      }
      lambda *= 10;
    }
    if (!stepped) {
      // Damping escalation exhausted: singular/stuck system, report honestly.
      out.converged = out.converged || cost == 0.0;
      break;
    }
    if (out.converged) break;
  }

  out.params = std::move(p);
  out.residual_norm = std::sqrt(cost);
  out.iterations = iter;
  return out;
}

}  // namespace sscool::numkit
