#pragma once
#include <cstddef>

#include "sscool/errors.hpp"

namespace sscool::model {

enum class EmissionPattern { Dipole, Isotropic };

// All frequencies in units of nu unless nu is set differently; eta and n0 dimensionless.
struct IonParams {
  double nu = 1.0;     // trap frequency, sets the unit
  double gamma = 0.1;  // excited-state linewidth
  double omega = 0.5;  // carrier coupling strength
  double delta = 0.0;  // laser detuning
  double eta = 0.1;    // Lamb-Dicke parameter
  double n0 = 10.0;    // initial thermal occupation
  EmissionPattern dipole = EmissionPattern::Dipole;

  void validate() const {
    if (!(nu > 0)) throw contract_error("IonParams: nu must be > 0");
    if (!(gamma > 0)) throw contract_error("IonParams: gamma must be > 0");
    if (!(omega >= 0)) throw contract_error("IonParams: omega must be >= 0");
    if (!(eta >= 0)) throw contract_error("IonParams: eta must be >= 0");
    if (!(n0 >= 0)) throw contract_error("IonParams: n0 must be >= 0");
  }
};

struct FockSpace {
  std::size_t cutoff = 70;  // phonon-number truncation N_max

  explicit FockSpace(std::size_t n) : cutoff(n) {
    if (cutoff < 2) throw contract_error("FockSpace: cutoff must be >= 2");
  }
  std::size_t total_dim() const { return 2 * cutoff; }
};

}  // namespace sscool::model
