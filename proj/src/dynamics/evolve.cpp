#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "sscool/dynamics/evolve.hpp"
#include "sscool/numkit/ode.hpp"

namespace sscool::dynamics {

using numkit::ComplexMatrix;
using numkit::cplx;

namespace {

// Plain-product fallback used when the structure-exploiting path is disabled.
class GenericRhs final : public CompiledRhs {
 public:
  const model::ModelTier* tier = nullptr;

  void eval(double, const double* y, double* dydt) const override {
    const std::size_t d = dim, dd = d * d;
    DensityMatrix rho;
    rho.m = ComplexMatrix(d, d);
    for (std::size_t k = 0; k < dd; ++k) rho.m.a[k] = cplx(y[k], y[dd + k]);
    const DensityMatrix out = lindblad_rhs(rho, *tier);
    for (std::size_t k = 0; k < dd; ++k) {
      dydt[k] = out.m.a[k].real();
      dydt[dd + k] = out.m.a[k].imag();
    }
  }
};

void symmetrize(ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i; j < m.cols; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
}

}  // namespace

CoolingTrajectory evolve(const DensityMatrix& rho0, const model::ModelTier& tier, double t_final,
                         const EvolveOptions& opts) {
  const std::size_t d = tier.hamiltonian.rows;
  if (!rho0.m.square() || rho0.m.rows != d)
    throw contract_error("evolve: state dimension does not match the tier");
  if (!(t_final > 0)) throw contract_error("evolve: t_final must be > 0");
  if (opts.samples < 2) throw contract_error("evolve: need at least 2 samples");
  if (!(opts.rel_tol > 0) || !(opts.abs_tol > 0))
    throw contract_error("evolve: tolerances must be > 0");
  if (std::abs(rho0.m.trace() - cplx(1.0)) > 1e-6)
    throw contract_error("evolve: initial state must have unit trace");
  if (numkit::hermiticity_residual(rho0.m) > 1e-8)
    throw contract_error("evolve: initial state must be Hermitian");

  DensityMatrix init = rho0;
  symmetrize(init.m);  // keeps the planar state exactly conjugate-symmetric

  std::unique_ptr<CompiledRhs> compiled;
  if (opts.use_fast_path) {
    compiled = compile_rhs(tier, true);
  } else {
    auto g = std::make_unique<GenericRhs>();
    g->tier = &tier;
    g->dim = d;
    compiled = std::move(g);
  }
  const bool rotated = compiled->rotating_frame();

  std::vector<double> ts(opts.samples);
  for (std::size_t i = 0; i < opts.samples; ++i)
    ts[i] = t_final * static_cast<double>(i) / static_cast<double>(opts.samples - 1);

  // Deterministic audit schedule; the final sample is always audited.
  std::set<std::size_t> audit_at;
  if (opts.positivity_audit_count > 0) {
    const std::size_t want = std::min(opts.positivity_audit_count, opts.samples);
    std::mt19937 gen(12345);
    std::uniform_int_distribution<std::size_t> dist(0, opts.samples - 1);
    audit_at.insert(opts.samples - 1);
    while (audit_at.size() < want) audit_at.insert(dist(gen));
  }

  CoolingTrajectory traj;
  traj.params = tier.params;
  traj.tier = tier.tag;
  traj.times.reserve(opts.samples);
  traj.nbar.reserve(opts.samples);
  traj.p_excited.reserve(opts.samples);
  double lambda_min = std::numeric_limits<double>::infinity();

  numkit::OdeOptions ode;
  ode.initial_step = std::min(0.1 / tier.params.nu, t_final / 1000.0);
  ode.observer = [&](std::size_t sample_idx, double t, std::vector<double>& y) {
    DensityMatrix work;
    unpack_state(y, d, rotated, tier.params.nu, t, work.m);
    traj.herm_drift_max = std::max(traj.herm_drift_max, numkit::hermiticity_residual(work.m));
    symmetrize(work.m);
    traj.trace_drift_max =
        std::max(traj.trace_drift_max, std::abs(work.m.trace() - cplx(1.0)));
    traj.times.push_back(t);
    traj.nbar.push_back(mean_phonon(work));
    traj.p_excited.push_back(excited_population(work));
    if (opts.record_subspace_pops)
      traj.subspace_pops.push_back(dressed_subspace_populations(work, tier.params));
    if (audit_at.count(sample_idx)) {
      lambda_min = std::min(lambda_min, min_eigenvalue(work));
      traj.audit_times.push_back(t);
    }
    if (sample_idx == opts.samples - 1) traj.final_state = std::move(work);
  };

  std::vector<double> y0;
  pack_state(init.m, y0);
  const CompiledRhs* rhs_ptr = compiled.get();
  numkit::RhsFn rhs = [rhs_ptr](double t, const double* y, double* dydt) {
    rhs_ptr->eval(t, y, dydt);
  };
  auto sol = numkit::integrate_adaptive(rhs, std::move(y0), {0.0, t_final}, opts.rel_tol,
                                        opts.abs_tol, ts, ode);

  traj.accepted_steps = sol.accepted_steps;
  traj.rejected_steps = sol.rejected_steps;
  traj.rhs_evaluations = sol.rhs_evaluations;
  if (!traj.audit_times.empty()) {
    traj.lambda_min_audit = lambda_min;
    traj.positivity_warning = lambda_min < -100.0 * opts.abs_tol;
  }
  return traj;
}

}  // namespace sscool::dynamics
