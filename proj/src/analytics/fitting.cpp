#include <algorithm>
#include <cmath>
#include <vector>

#include "sscool/analytics/fitting.hpp"
#include "sscool/errors.hpp"
#include "sscool/numkit/least_squares.hpp"

namespace sscool::analytics {

CoolingFit fit_cooling_curve(const std::vector<double>& times, const std::vector<double>& nbar,
                             double window_start) {
  if (times.size() != nbar.size()) throw contract_error("fit_cooling_curve: size mismatch");
  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] >= times[i - 1]))
      throw contract_error("fit_cooling_curve: times must be nondecreasing");
    if (times[i] >= window_start) {
      t.push_back(times[i]);
      y.push_back(nbar[i]);
    }
  }
  const std::size_t n = t.size();
  if (n < 4) throw contract_error("fit_cooling_curve: fewer than 4 samples in the fit window");

  // Initial guesses: plateau from the trailing decade, amplitude from the first
  // sample, decay rate from a log-slope over the leading half (guarded).
  std::size_t tail = std::max<std::size_t>(n / 10, 2);
  double c0 = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) c0 += y[i];
  c0 /= static_cast<double>(tail);
  double a0 = y.front() - c0;
  const double span = t.back() - t.front();
  double w0 = 0.0;
  if (a0 > 0.0 && span > 0.0) {
    // regress ln(y - c0) against t where the subtraction stays positive
    double st = 0, sl = 0, stt = 0, stl = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double d = y[i] - c0;
      if (d > 1e-300) {
        const double l = std::log(d);
        st += t[i];
        sl += l;
        stt += t[i] * t[i];
        stl += t[i] * l;
        ++cnt;
      }
    }
    if (cnt >= 2) {
      const double denom = static_cast<double>(cnt) * stt - st * st;
      if (denom > 0) w0 = -(static_cast<double>(cnt) * stl - st * sl) / denom;
    }
  }
  if (!(w0 > 0) || !std::isfinite(w0)) w0 = (span > 0) ? 2.0 / span : 1.0;
  if (!(a0 > 0)) a0 = std::max(std::abs(y.front()), 1e-12);

  numkit::ModelFn model = [&t](const std::vector<double>& q) {
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = q[0] * std::exp(-q[1] * t[i]) + q[2];
    return out;
  };
  numkit::JacobianFn jac = [&t](const std::vector<double>& q) {
    std::vector<std::vector<double>> J(t.size(), std::vector<double>(3));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-q[1] * t[i]);
      J[i][0] = e;
      J[i][1] = -q[0] * t[i] * e;
      J[i][2] = 1.0;
    }
    return J;
  };

  auto ls = numkit::least_squares(model, jac, {a0, w0, c0}, y);

  // Second pass with relative weighting. Unweighted residuals on a decay that
  // spans several decades are owned entirely by the large-amplitude head, so
  // the plateau parameter comes back essentially unconstrained (it can even go
  // negative). Scaling each sample by 1/max(|y|, 1e-4 ymax) lets every decade
  // vote with comparable strength; refine from the stage-one parameters and
  // keep the refinement only if it converges.
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  if (ymax > 0.0) {
    std::vector<double> s(n), yw(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = 1.0 / std::max(std::abs(y[i]), 1e-4 * ymax);
      yw[i] = s[i] * y[i];
    }
    numkit::ModelFn wmodel = [&t, &s](const std::vector<double>& q) {
      std::vector<double> out(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = s[i] * (q[0] * std::exp(-q[1] * t[i]) + q[2]);
      return out;
    };
    numkit::JacobianFn wjac = [&t, &s](const std::vector<double>& q) {
      std::vector<std::vector<double>> J(t.size(), std::vector<double>(3));
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = std::exp(-q[1] * t[i]);
        J[i][0] = s[i] * e;
        J[i][1] = -s[i] * q[0] * t[i] * e;
        J[i][2] = s[i];
      }
      return J;
    };
    auto wls = numkit::least_squares(wmodel, wjac, ls.params, yw);
    if (wls.converged) ls = std::move(wls);
  }

  CoolingFit fit;
  fit.amplitude = ls.params[0];
  fit.w_fit = ls.params[1];
  fit.nbar_st_fit = ls.params[2];
  fit.residual_norm = ls.residual_norm;
  fit.converged = ls.converged;
  fit.low_identifiability =
      (!ls.low_curvature.empty() && (ls.low_curvature[0] || ls.low_curvature[1]));
  return fit;
}

}  // namespace sscool::analytics
