#include <algorithm>
#include <cmath>
#include <string>

#include "sscool/errors.hpp"
#include "sscool/numkit/ode.hpp"

namespace sscool::numkit {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;
// Quartic dense-output polynomial, column j multiplies theta^{j+1}.
constexpr double P1[4] = {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
                          -12715105075.0 / 11282082432.0};
constexpr double P3[4] = {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
                          87487479700.0 / 32700410799.0};
constexpr double P4[4] = {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
                          -10690763975.0 / 1880347072.0};
constexpr double P5[4] = {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
                          701980252875.0 / 199316789632.0};
constexpr double P6[4] = {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
                          -1453857185.0 / 822651844.0};
constexpr double P7[4] = {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
                          69997945.0 / 29380423.0};

double theta_poly(const double p[4], double th) {
  return th * (p[0] + th * (p[1] + th * (p[2] + th * p[3])));
}

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

OdeSolution integrate_adaptive(const RhsFn& rhs, std::vector<double> y,
                               std::pair<double, double> t_span, double rel_tol, double abs_tol,
                               const std::vector<double>& sample_times, const OdeOptions& opts) {
  const double t0 = t_span.first, t1 = t_span.second;
  if (!(t1 > t0)) throw contract_error("integrate_adaptive: need t1 > t0");
  if (!(rel_tol > 0) || !(abs_tol > 0))
    throw contract_error("integrate_adaptive: tolerances must be positive");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 - 1e-12 || sample_times[i] > t1 + 1e-12)
      throw contract_error("integrate_adaptive: sample time outside span");
    if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
      throw contract_error("integrate_adaptive: sample times must increase");
  }

  const std::size_t n = y.size();
  OdeSolution sol;
  sol.tolerance = rel_tol;
  const bool store = !opts.observer;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n), ysample(n);

  auto emit = [&](std::size_t idx, double ts, std::vector<double>& state) {
    if (opts.observer) {
      opts.observer(idx, ts, state);
    } else {
      sol.times.push_back(ts);
      sol.states.push_back(state);
    }
  };

  std::size_t next_sample = 0;
  // Samples at (or numerically before) t0 take the initial state.
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0 + 1e-14 * (t1 - t0)) {
    ysample = y;
    emit(next_sample, sample_times[next_sample], ysample);
    ++next_sample;
  }

  double t = t0;
  rhs(t, y.data(), k1.data());
  sol.rhs_evaluations = 1;
  if (!finite(k1)) throw diagnostic_error("integrate_adaptive: NaN in rhs at t=" + std::to_string(t));

  // Initial step: caller hint or the classic two-evaluation estimate.
  double h = opts.initial_step;
  if (h <= 0) {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = abs_tol + rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h0 * k1[i];
    rhs(t + h0, yt.data(), k2.data());
    ++sol.rhs_evaluations;
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = abs_tol + rel_tol * std::abs(y[i]);
      const double df = (k2[i] - k1[i]) / sc;
      d2 += df * df;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                      : std::pow(0.01 / dmax, 0.2);
    h = std::min({100 * h0, h1, t1 - t0, opts.max_step});
  }
  h = std::min({h, opts.max_step, t1 - t0});

  double err_prev = 1.0;
  bool last_rejected = false;

  while (t < t1) {
    if (sol.accepted_steps + sol.rejected_steps > opts.max_steps)
      throw diagnostic_error("integrate_adaptive: step budget exhausted at t=" + std::to_string(t));
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw diagnostic_error("integrate_adaptive: step underflow, last good t=" + std::to_string(t));
    if (t + h > t1) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (A21 * k1[i]);
    rhs(t + C2 * h, yt.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    rhs(t + C3 * h, yt.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    rhs(t + C4 * h, yt.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    rhs(t + C5 * h, yt.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    rhs(t + h, yt.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    rhs(t + h, ynew.data(), k7.data());
    sol.rhs_evaluations += 5;

    double err2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                            E7 * k7[i]);
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err2 += (e / sc) * (e / sc);
    }
    double err = std::sqrt(err2 / n);

    if (!std::isfinite(err)) {
      // NaN escaped a stage: either the rhs is poisoned at the current state
      // (fails even for tiny h) or the step was just too large.
      if (h < 1e-12) throw diagnostic_error("integrate_adaptive: NaN in rhs at t=" + std::to_string(t));
      h *= 0.25;
      ++sol.rejected_steps;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      // Accepted: emit dense-output samples inside (t, t+h].
      while (next_sample < sample_times.size() &&
             sample_times[next_sample] <= t + h + 1e-12 * (t1 - t0)) {
        const double th = std::clamp((sample_times[next_sample] - t) / h, 0.0, 1.0);
        const double c1 = theta_poly(P1, th), c3 = theta_poly(P3, th), c4 = theta_poly(P4, th),
                     c5 = theta_poly(P5, th), c6 = theta_poly(P6, th), c7 = theta_poly(P7, th);
        for (std::size_t i = 0; i < n; ++i)
          ysample[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c5 * k5[i] +
                                   c6 * k6[i] + c7 * k7[i]);
        emit(next_sample, sample_times[next_sample], ysample);
        ++next_sample;
      }
      t += h;
      std::swap(y, ynew);
      std::swap(k1, k7);  // FSAL
      ++sol.accepted_steps;

      const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.14) * std::pow(err_prev, 0.08);
      double growth = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) growth = std::min(growth, 1.0);
      h = std::min(h * growth, opts.max_step);
      err_prev = std::max(err, 1e-10);
      last_rejected = false;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.7);
      ++sol.rejected_steps;
      last_rejected = true;
    }
  }

  // Trailing samples that coincide with t1 within fuzz.
  while (next_sample < sample_times.size()) {
    ysample = y;
    emit(next_sample, sample_times[next_sample], ysample);
    ++next_sample;
  }

  if (store && sol.times.empty()) {
    sol.times.push_back(t1);
    sol.states.push_back(y);
  }
  if (!store) {
    // Observer mode keeps memory flat; hand back the end state for callers that need it.
    sol.times.assign(1, t1);
    sol.states.assign(1, y);
  }
  return sol;
}

}  // namespace sscool::numkit
