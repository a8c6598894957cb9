// Timing harness: structure-exploiting RHS kernels against the plain-matmul
// reference, plus a lab-frame vs rotating-frame step-count comparison.
// usage: bench_rhs [cutoff] [fast_iters] [ref_iters] [t_span]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/dynamics/evolve.hpp"
#include "sscool/model/tiers.hpp"
#include "sscool/numkit/ode.hpp"

using Clock = std::chrono::steady_clock;

static double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  const std::size_t cutoff = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 40;
  const int fast_iters = argc > 2 ? std::atoi(argv[2]) : 50;
  const int ref_iters = argc > 3 ? std::atoi(argv[3]) : 3;
  const double t_span = argc > 4 ? std::atof(argv[4]) : 200.0;

  sscool::model::IonParams p;
  p.n0 = static_cast<double>(cutoff) / 10.0;  // keeps the thermal tail below the truncation gate
  p.delta = sscool::analytics::ssc_resonance_delta(p.nu, p.omega);
  sscool::model::FockSpace space(cutoff);
  const auto tier = sscool::model::build_tier(p, space, sscool::model::TierTag::Exact);
  const auto rho0 = sscool::model::thermal_initial_state(p, space);
  const std::size_t d = space.total_dim();
  std::printf("exact tier, cutoff=%zu (dim %zu), omega=%g, delta=%g\n", cutoff, d, p.omega,
              p.delta);

  const auto rot = sscool::dynamics::compile_rhs(tier, true);
  const auto lab = sscool::dynamics::compile_rhs(tier, false);

  std::vector<double> y;
  sscool::dynamics::pack_state(rho0.m, y);
  std::vector<double> d_rot(y.size()), d_lab(y.size()), d_ref(y.size());

  // Deviation against the reference at t=0 (frame phases are unity there).
  const auto ref = sscool::dynamics::lindblad_rhs(rho0, tier);
  sscool::dynamics::pack_state(ref.m, d_ref);
  rot->eval(0.0, y.data(), d_rot.data());
  lab->eval(0.0, y.data(), d_lab.data());
  double dev_rot = 0.0, dev_lab = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    dev_rot = std::max(dev_rot, std::abs(d_rot[i] - d_ref[i]));
    dev_lab = std::max(dev_lab, std::abs(d_lab[i] - d_ref[i]));
    scale = std::max(scale, std::abs(d_ref[i]));
  }
  std::printf("max |fast - reference| at t=0: rotating %.3e, lab %.3e (rhs scale %.3e)\n",
              dev_rot, dev_lab, scale);

  auto time_eval = [&](const sscool::dynamics::CompiledRhs& r, int iters) {
    const auto t0 = Clock::now();
    for (int i = 0; i < iters; ++i) r.eval(0.37 + 0.01 * i, y.data(), d_rot.data());
    return ms_since(t0) / iters;
  };
  std::printf("fast rhs (rotating): %.3f ms/eval\n", time_eval(*rot, fast_iters));
  std::printf("fast rhs (lab):      %.3f ms/eval\n", time_eval(*lab, fast_iters));
  {
    const auto t0 = Clock::now();
    for (int i = 0; i < ref_iters; ++i)
      sscool::dynamics::lindblad_rhs(rho0, tier);
    std::printf("reference rhs:       %.3f ms/eval\n", ms_since(t0) / ref_iters);
  }

  // Step counts over a real span decide the production frame.
  auto integrate = [&](const sscool::dynamics::CompiledRhs& r, const char* name) {
    sscool::numkit::OdeOptions opts;
    opts.observer = [](std::size_t, double, std::vector<double>&) {};
    const auto t0 = Clock::now();
    const auto sol = sscool::numkit::integrate_adaptive(
        [&r](double t, const double* yy, double* dy) { r.eval(t, yy, dy); }, y,
        {0.0, t_span}, 1e-8, 1e-10, {0.0, t_span}, opts);
    std::printf("%s: t_span=%g accepted=%zu rejected=%zu evals=%zu wall=%.1f ms\n", name,
                t_span, sol.accepted_steps, sol.rejected_steps, sol.rhs_evaluations,
                ms_since(t0));
  };
  integrate(*rot, "rotating frame");
  integrate(*lab, "lab frame     ");
  return 0;
}
