#include <cmath>
#include <numeric>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/analytics/rates.hpp"
#include "sscool/numkit/linalg.hpp"
#include "sscool/numkit/ode.hpp"

namespace sscool::analytics {

RateModel rate_model(const model::IonParams& p, std::size_t truncation, RateVariant variant) {
  p.validate();
  if (truncation < 2) throw contract_error("rate_model: truncation must be >= 2");
  const auto r = dressed_rates(p);
  const double gm = r.gamma_minus, gp = r.gamma_plus, gphi = r.gamma_phi;
  const std::size_t T = truncation;

  RateModel m;
  m.variant = variant;
  m.truncation = T;

  if (variant == RateVariant::DiagonalDressed) {
    // Manifold-n doublet states carry equal weight on the two dressed legs, so each
    // channel splits its rate in half per leg and again per landing state.
    m.dim = 2 * T + 1;
    m.generator.assign(m.dim * m.dim, 0.0);
    auto G = [&](std::size_t i, std::size_t j) -> double& { return m.generator[i * m.dim + j]; };
    auto idx = [](std::size_t n, std::size_t s) { return 2 * n - 1 + s; };  // s = 0 (+), 1 (-)

    G(0, 0) = -gp;
    G(idx(1, 0), 0) = 0.5 * gp;
    G(idx(1, 1), 0) = 0.5 * gp;
    for (std::size_t n = 1; n <= T; ++n) {
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t j = idx(n, s);
        double out = 0.5 * gm + gphi;  // cooling leg + doublet mixing
        if (n == 1) {
          G(0, j) += 0.5 * gm;
        } else {
          G(idx(n - 1, 0), j) += 0.25 * gm;
          G(idx(n - 1, 1), j) += 0.25 * gm;
        }
        if (n < T) {  // reflecting top: heating out of the last manifold dropped
          out += 0.5 * gp;
          G(idx(n + 1, 0), j) += 0.25 * gp;
          G(idx(n + 1, 1), j) += 0.25 * gp;
        }
        G(idx(n, 1 - s), j) += gphi;
        G(j, j) = -out;
      }
    }
    return m;
  }

  // Full/Scaled: manifold totals p_n. They differ only in the ground-manifold
  // heating rate (gp vs gp/2).
  m.dim = T + 1;
  m.generator.assign(m.dim * m.dim, 0.0);
  auto G = [&](std::size_t i, std::size_t j) -> double& { return m.generator[i * m.dim + j]; };
  const double up0 = (variant == RateVariant::Full) ? gp : 0.5 * gp;
  G(0, 0) = -up0;
  G(1, 0) = up0;
  for (std::size_t n = 1; n <= T; ++n) {
    double out = 0.5 * gm;
    G(n - 1, n) = 0.5 * gm;
    if (n < T) {
      out += 0.5 * gp;
      G(n + 1, n) = 0.5 * gp;
    }
    G(n, n) = -out;
  }
  return m;
}

std::vector<double> rate_steady_state(const RateModel& m) {
  if (m.dim == 0 || m.generator.size() != m.dim * m.dim)
    throw contract_error("rate_steady_state: malformed model");
  // G p = 0 with sum(p) = 1: replace the (redundant) first row by the
  // normalization constraint.
  std::vector<double> a = m.generator;
  for (std::size_t j = 0; j < m.dim; ++j) a[j] = 1.0;
  std::vector<double> rhs(m.dim, 0.0);
  rhs[0] = 1.0;
  if (!numkit::detail::lu_solve(a, m.dim, rhs))
    throw diagnostic_error("rate_steady_state: singular generator");
  return rhs;
}

namespace {

double manifold_nbar(const RateModel& m, const std::vector<double>& p) {
  double s = 0.0;
  if (m.variant == RateVariant::DiagonalDressed) {
    for (std::size_t n = 1; n <= m.truncation; ++n)
      s += (p[2 * n - 1] + p[2 * n]) * (static_cast<double>(n) - 0.5);
  } else {
    for (std::size_t n = 1; n <= m.truncation; ++n)
      s += p[n] * (static_cast<double>(n) - 0.5);
  }
  return s;
}

}  // namespace

RateTrajectory rate_evolve(const RateModel& m, std::vector<double> p0, double t_final,
                           std::size_t samples) {
  if (p0.size() != m.dim) throw contract_error("rate_evolve: p0 size mismatch");
  if (!(t_final > 0)) throw contract_error("rate_evolve: t_final must be > 0");
  if (samples < 2) throw contract_error("rate_evolve: need samples >= 2");

  std::vector<double> ts(samples);
  for (std::size_t i = 0; i < samples; ++i)
    ts[i] = t_final * static_cast<double>(i) / static_cast<double>(samples - 1);

  const auto& gen = m.generator;
  const std::size_t d = m.dim;
  numkit::RhsFn rhs = [&gen, d](double, const double* y, double* dydt) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      const double* row = gen.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * y[j];
      dydt[i] = acc;
    }
  };

  auto sol = numkit::integrate_adaptive(rhs, std::move(p0), {0.0, t_final}, 1e-10, 1e-13, ts);

  RateTrajectory out;
  out.times = std::move(sol.times);
  out.populations = std::move(sol.states);
  out.nbar.reserve(out.populations.size());
  for (const auto& p : out.populations) out.nbar.push_back(manifold_nbar(m, p));
  return out;
}

std::vector<double> thermal_populations(double n0, std::size_t truncation) {
  if (!(n0 >= 0)) throw contract_error("thermal_populations: n0 must be >= 0");
  if (truncation < 2) throw contract_error("thermal_populations: truncation must be >= 2");
  std::vector<double> p(truncation + 1);
  const double q = n0 / (1.0 + n0);
  double w = 1.0 / (1.0 + n0);
  for (std::size_t n = 0; n <= truncation; ++n) {
    p[n] = w;
    w *= q;
  }
  const double norm = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= norm;
  return p;
}

}  // namespace sscool::analytics
