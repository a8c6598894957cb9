#pragma once
#include <memory>
#include <vector>

#include "sscool/dynamics/density_matrix.hpp"
#include "sscool/model/tiers.hpp"

namespace sscool::dynamics {

struct CoolingTrajectory {
  std::vector<double> times;
  std::vector<double> nbar;
  std::vector<double> p_excited;
  std::vector<std::vector<double>> subspace_pops;  // empty unless requested
  model::IonParams params;
  model::TierTag tier = model::TierTag::Exact;

  // Audits gathered at sample points.
  double trace_drift_max = 0.0;    // max |tr rho - 1|
  double herm_drift_max = 0.0;     // max pre-symmetrization hermiticity residual
  double lambda_min_audit = 0.0;   // smallest eigenvalue over audited samples
  std::vector<double> audit_times;
  bool positivity_warning = false;

  std::size_t accepted_steps = 0, rejected_steps = 0, rhs_evaluations = 0;
  DensityMatrix final_state;
};

struct EvolveOptions {
  std::size_t samples = 400;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  bool record_subspace_pops = false;
  bool use_fast_path = true;  // structure-exploiting kernels; false = plain matmul loop
  std::size_t positivity_audit_count = 10;
};

// Reference Lindblad right-hand side: -i[H,rho] + sum_j (L rho L^dag - {L^dag L, rho}/2),
// straight from the tier's operator matrices. The optimized path is validated against it.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const model::ModelTier& tier);

CoolingTrajectory evolve(const DensityMatrix& rho0, const model::ModelTier& tier,
                         double t_final, const EvolveOptions& opts = {});
inline CoolingTrajectory evolve(const DensityMatrix& rho0, const model::ModelTier& tier,
                                double t_final, std::size_t sample_count, double rel_tol) {
  EvolveOptions o;
  o.samples = sample_count;
  o.rel_tol = rel_tol;
  return evolve(rho0, tier, t_final, o);
}

double mean_phonon(const DensityMatrix& rho);
double excited_population(const DensityMatrix& rho);
// p_0 = <-,0|rho|-,0>; p_n = <+,n-1|rho|+,n-1> + <-,n|rho|-,n>.
std::vector<double> dressed_subspace_populations(const DensityMatrix& rho,
                                                 const model::IonParams& p);
double min_eigenvalue(const DensityMatrix& rho);

// Compiled right-hand side over the planar state [Re(rho); Im(rho)] (row-major d*d each).
// The exact and Lamb-Dicke tiers integrate in the frame rotating with nu*n_hat, which
// leaves every recorded observable invariant and removes the fast phonon phases.
struct CompiledRhs {
  virtual ~CompiledRhs() = default;
  virtual void eval(double t, const double* y, double* dydt) const = 0;
  virtual bool rotating_frame() const { return false; }
  std::size_t dim = 0;  // matrix dimension d; state holds 2*d*d doubles
};
std::unique_ptr<CompiledRhs> compile_rhs(const model::ModelTier& tier, bool allow_rotating);

void pack_state(const numkit::ComplexMatrix& rho, std::vector<double>& y);
// Inverse of pack_state; when rotated at time t, undoes the frame phases first.
void unpack_state(const std::vector<double>& y, std::size_t d, bool rotated, double nu, double t,
                  numkit::ComplexMatrix& rho);

}  // namespace sscool::dynamics
