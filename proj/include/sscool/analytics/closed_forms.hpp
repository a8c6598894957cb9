#pragma once
#include <array>

#include "sscool/model/params.hpp"

namespace sscool::analytics {

// Internal 2-vectors in the (g,e) ordering: |+> = sin(phi)|e> + cos(phi)|g>,
// |-> = cos(phi)|e> - sin(phi)|g>.
struct DressedBasis {
  double phi = 0.0;
  double omega_plus = 0.0, omega_minus = 0.0;
  std::array<double, 2> plus_vec{}, minus_vec{};
};

struct DressedRates {
  double beta = 0.0;
  double gamma_minus = 0.0, gamma_plus = 0.0, gamma_phi = 0.0;
};

enum class Regime { WSC, SSC, SSC_APPROX };

struct CoolingPrediction {
  double w = 0.0;
  double nbar_st = 0.0;
  Regime regime = Regime::SSC;
};

DressedBasis dressed_basis(double delta, double omega);

// Delta = -sqrt(nu^2 - Omega^2); requires 0 <= Omega < nu.
double ssc_resonance_delta(double nu, double omega);

// beta = sqrt(nu^2 - Omega^2)/nu; gamma_± = ((1 ∓ beta)/2)^2 gamma,
// gamma_phi = (1 - beta^2)/4 gamma. Identity gamma_- + gamma_+ + 2 gamma_phi = gamma.
DressedRates dressed_rates(const model::IonParams& p);

// W = eta^2 Omega^2 / gamma (constant-1 convention, see wsc_rate_constant);
// nbar_st = (alpha + 1/4)(gamma/2nu)^2, alpha = 2/5 dipole, 1/3 isotropic.
CoolingPrediction wsc_prediction(const model::IonParams& p);
inline constexpr double wsc_rate_constant = 1.0;

// nbar_st = (beta + 1/beta)/4 - 1/2 (equivalently gamma_+/(gamma_- - gamma_+));
// W = gamma_-/(2(1+n0)) - gamma_+/(2 n0).
CoolingPrediction ssc_prediction(const model::IonParams& p);
// W ≈ gamma beta / (2 n0).
CoolingPrediction ssc_approx_prediction(const model::IonParams& p);

}  // namespace sscool::analytics
