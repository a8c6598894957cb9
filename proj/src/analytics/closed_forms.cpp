#include <cmath>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/errors.hpp"

namespace sscool::analytics {

DressedBasis dressed_basis(double delta, double omega) {
  if (!(omega >= 0)) throw contract_error("dressed_basis: omega must be >= 0");
  const double r = std::sqrt(delta * delta + omega * omega);
  if (!(r > 0)) throw contract_error("dressed_basis: need |delta| + omega > 0");
  DressedBasis b;
  b.phi = std::asin(std::sqrt(0.5 * (1.0 - delta / r)));
  b.omega_plus = 0.5 * (-delta + r);
  b.omega_minus = 0.5 * (-delta - r);
  const double s = std::sin(b.phi), c = std::cos(b.phi);
  b.plus_vec = {c, s};    // cos(phi)|g> + sin(phi)|e>
  b.minus_vec = {-s, c};  // -sin(phi)|g> + cos(phi)|e>
  return b;
}

double ssc_resonance_delta(double nu, double omega) {
  if (!(nu > 0)) throw contract_error("ssc_resonance_delta: nu must be > 0");
  if (!(omega >= 0 && omega < nu))
    throw contract_error("ssc_resonance_delta: need 0 <= omega < nu");
  return -std::sqrt(nu * nu - omega * omega);
}

DressedRates dressed_rates(const model::IonParams& p) {
  p.validate();
  if (!(p.omega < p.nu)) throw contract_error("dressed_rates: need omega < nu");
  DressedRates r;
  r.beta = std::sqrt(p.nu * p.nu - p.omega * p.omega) / p.nu;
  const double lo = 0.5 * (1.0 - r.beta), hi = 0.5 * (1.0 + r.beta);
  r.gamma_minus = hi * hi * p.gamma;
  r.gamma_plus = lo * lo * p.gamma;
  r.gamma_phi = 0.25 * (1.0 - r.beta * r.beta) * p.gamma;
  return r;
}

CoolingPrediction wsc_prediction(const model::IonParams& p) {
  p.validate();
  CoolingPrediction c;
  c.regime = Regime::WSC;
  c.w = wsc_rate_constant * p.eta * p.eta * p.omega * p.omega / p.gamma;
  const double alpha = (p.dipole == model::EmissionPattern::Dipole) ? 0.4 : (1.0 / 3.0);
  const double x = p.gamma / (2.0 * p.nu);
  c.nbar_st = (alpha + 0.25) * x * x;
  return c;
}

CoolingPrediction ssc_prediction(const model::IonParams& p) {
  p.validate();
  if (!(p.n0 > 0)) throw contract_error("ssc_prediction: need n0 > 0");
  const auto r = dressed_rates(p);
  CoolingPrediction c;
  c.regime = Regime::SSC;
  c.w = r.gamma_minus / (2.0 * (1.0 + p.n0)) - r.gamma_plus / (2.0 * p.n0);
  c.nbar_st = r.gamma_plus / (r.gamma_minus - r.gamma_plus);
  return c;
}

CoolingPrediction ssc_approx_prediction(const model::IonParams& p) {
  p.validate();
  if (!(p.n0 > 0)) throw contract_error("ssc_approx_prediction: need n0 > 0");
  const auto r = dressed_rates(p);
  CoolingPrediction c;
  c.regime = Regime::SSC_APPROX;
  c.w = p.gamma * r.beta / (2.0 * p.n0);
  c.nbar_st = r.gamma_plus / (r.gamma_minus - r.gamma_plus);
  return c;
}

}  // namespace sscool::analytics
