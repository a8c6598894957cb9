// Go/no-go gate: ten end-to-end checks of the cooling toolkit, each printing
// one PASS/FAIL line with the measured numbers. `--criterion N` runs a single
// check in isolation; a full run shares the expensive master-equation
// trajectories between checks. Exit code = number of failures.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "sscool/analytics/closed_forms.hpp"
#include "sscool/analytics/fitting.hpp"
#include "sscool/analytics/rates.hpp"
#include "sscool/dynamics/evolve.hpp"
#include "sscool/model/operators.hpp"
#include "sscool/model/tiers.hpp"
#include "sscool/numkit/linalg.hpp"
#include "sscool/numkit/ode.hpp"
#include "sscool/numkit/quadrature.hpp"

using namespace sscool;

namespace {

constexpr std::size_t kCutoff = 70;
constexpr double kEta = 0.1;
constexpr double kRelTol = 1e-8;
constexpr std::size_t kSamples = 400;
// Shared production horizon: long enough that the slowest check (plateau
// extraction at Omega = 0.5) has fully equilibrated; the conservation audit
// then covers a superset of its required window.
constexpr double kHorizon = 5000.0;
// The weak-coupling point decays at ~2e-4/t, so it needs a longer record
// before the rate is identifiable.
constexpr double kWeakHorizon = 10000.0;

model::IonParams production_params(double omega, double gamma) {
  model::IonParams p;
  p.nu = 1.0;
  p.gamma = gamma;
  p.omega = omega;
  p.eta = kEta;
  p.n0 = 10.0;
  p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
  return p;
}

// One exact-tier integration per (omega, gamma, horizon), shared across checks.
const dynamics::CoolingTrajectory& production_run(double omega, double gamma, double t_final) {
  static std::map<std::array<double, 3>, dynamics::CoolingTrajectory> cache;
  const std::array<double, 3> key{omega, gamma, t_final};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::printf("  . integrating exact dynamics: omega=%g gamma=%g t_final=%g\n", omega, gamma,
              t_final);
  std::fflush(stdout);
  const auto p = production_params(omega, gamma);
  const model::FockSpace space(kCutoff);
  const auto tier = model::build_tier(p, space, model::TierTag::Exact);
  const auto rho0 = model::thermal_initial_state(p, space);
  dynamics::EvolveOptions opts;
  opts.samples = kSamples;
  opts.rel_tol = kRelTol;
  auto traj = dynamics::evolve(rho0, tier, t_final, opts);
  return cache.emplace(key, std::move(traj)).first->second;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// --- 1: the angular jump family resolves the total linewidth exactly --------

bool check_jump_completeness(std::string& detail) {
  const auto p = production_params(0.5, 0.1);
  const model::FockSpace space(kCutoff);
  const auto js = model::dissipator_exact(p, space, 32);

  numkit::ComplexMatrix sum(space.total_dim(), space.total_dim());
  for (const auto& L : js.jumps) sum += numkit::matmul(L.adjoint(), L);
  const auto target =
      p.gamma * model::embed(model::ket_bra_ee(), numkit::ComplexMatrix::identity(space.cutoff));
  double comp = 0.0;
  for (std::size_t k = 0; k < sum.a.size(); ++k)
    comp = std::max(comp, std::abs(sum.a[k] - target.a[k]));

  // second moment of the dipole emission pattern: int (3/8)(1+u^2) u^2 du = 2/5
  double m2 = 0.0;
  for (std::size_t j = 0; j < js.angular.nodes.size(); ++j)
    m2 += js.angular.rates[j] * js.angular.nodes[j] * js.angular.nodes[j];
  const double m2_dev = std::abs(m2 / p.gamma - 0.4);

  detail = fmt("max|sum L^dag L - gamma P_e x I|=%.3e (<=1e-12), dipole second moment dev=%.3e "
               "(<=1e-12), %zu jumps",
               comp, m2_dev, js.jumps.size());
  return comp <= 1e-12 && m2_dev <= 1e-12;
}

// --- 2: trace and positivity hold over the full cooling record --------------

bool check_conservation(std::string& detail) {
  const auto& traj = production_run(0.5, 0.1, kHorizon);
  const bool ok = traj.trace_drift_max <= 1e-7 && traj.lambda_min_audit >= -1e-7;
  detail = fmt("trace drift=%.3e (<=1e-7), lambda_min=%.3e (>=-1e-7), herm drift=%.3e, "
               "%zu audit points over t=[0,%g]",
               traj.trace_drift_max, traj.lambda_min_audit, traj.herm_drift_max,
               traj.audit_times.size(), kHorizon);
  return ok;
}

// --- 3: scaled chain vs its single-exponential thermal closed form ----------

bool check_rate_closed_form(std::string& detail) {
  // Claim under test: every component of the scaled chain relaxes as
  // p_n(t) = (p_n(0) - p_n,st) e^{-W t} + p_n,st toward the geometric steady
  // distribution, at the single aggregate rate W.
  const std::size_t trunc = 120;
  double worst = 0.0;
  double worst_n0 = 0.0;
  for (double n0 : {2.0, 6.0, 10.0}) {
    auto p = production_params(0.5, 0.1);
    p.n0 = n0;
    const auto m = analytics::rate_model(p, trunc, analytics::RateVariant::Scaled);
    const auto pred = analytics::ssc_prediction(p);
    const auto dr = analytics::dressed_rates(p);
    const double r = dr.gamma_plus / dr.gamma_minus;
    std::vector<double> p_st(trunc + 1);
    double rn = 1.0;
    for (std::size_t n = 0; n <= trunc; ++n, rn *= r) p_st[n] = (1.0 - r) * rn;

    const auto p0 = analytics::thermal_populations(n0, trunc);
    const double t_final = 6.0 / pred.w;
    const auto traj = analytics::rate_evolve(m, p0, t_final, 120);
    double dev = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double decay = std::exp(-pred.w * traj.times[k]);
      for (std::size_t n = 0; n <= trunc; ++n) {
        const double closed = (p0[n] - p_st[n]) * decay + p_st[n];
        dev = std::max(dev, std::abs(traj.populations[k][n] - closed));
      }
    }
    if (dev > worst) {
      worst = dev;
      worst_n0 = n0;
    }
  }
  detail = fmt("max per-component deviation from single-rate relaxation=%.3e (<=1e-6, worst at "
               "n0=%g)",
               worst, worst_n0);
  return worst <= 1e-6;
}

// --- 4: full chain nullspace vs the geometric steady distribution -----------

bool check_steady_state(std::string& detail) {
  const std::size_t trunc = 200;
  const auto p = production_params(0.5, 0.1);
  const auto m = analytics::rate_model(p, trunc, analytics::RateVariant::Full);
  const auto ss = analytics::rate_steady_state(m);
  const auto dr = analytics::dressed_rates(p);
  const double r = dr.gamma_plus / dr.gamma_minus;

  const double p0 = (1.0 - r) / (1.0 + r);
  double comp_dev = std::abs(ss[0] - p0);
  double rn = r;
  for (std::size_t n = 1; n <= trunc; ++n, rn *= r)
    comp_dev = std::max(comp_dev, std::abs(ss[n] - 2.0 * rn * p0));

  double nbar = 0.0;
  for (std::size_t n = 1; n <= trunc; ++n) nbar += ss[n] * (static_cast<double>(n) - 0.5);
  const auto pred = analytics::ssc_prediction(p);
  const double nbar_dev = std::abs(nbar - pred.nbar_st);

  detail = fmt("max|p_n - geometric|=%.3e (<=1e-10), |nbar - %.6e|=%.3e (<=1e-9)", comp_dev,
               pred.nbar_st, nbar_dev);
  return comp_dev <= 1e-10 && nbar_dev <= 1e-9;
}

// --- 5: exact dynamics against the strong-coupling rate and plateau ---------

bool check_strong_coupling(std::string& detail) {
  const auto& traj = production_run(0.5, 0.1, kHorizon);
  const auto fit = analytics::fit_cooling_curve(traj.times, traj.nbar);
  const auto pred = analytics::ssc_prediction(production_params(0.5, 0.1));

  const double w_dev = std::abs(fit.w_fit - pred.w) / pred.w;
  const double lo = pred.nbar_st;
  const double hi = 3.0 * pred.nbar_st + 5e-3;
  const bool band = fit.nbar_st_fit >= lo && fit.nbar_st_fit <= hi;

  detail = fmt("W_fit=%.4e vs %.4e (rel dev %.3f <= 0.25), nbar_st_fit=%.4e in [%.4e, %.4e]=%s",
               fit.w_fit, pred.w, w_dev, fit.nbar_st_fit, lo, hi, band ? "yes" : "no");
  return w_dev <= 0.25 && band;
}

// --- 6: peak cooling rate and its location over the coupling sweep ----------

bool check_peak_rate(std::string& detail) {
  const std::size_t points = 24;
  double best_w = -1.0, best_omega = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double omega =
        0.05 + (0.6 - 0.05) * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto& traj = production_run(omega, 0.1, kHorizon);
    const auto fit = analytics::fit_cooling_curve(traj.times, traj.nbar);
    std::printf("  . omega=%.4f  W_fit=%.4e  nbar_st_fit=%.4e\n", omega, fit.w_fit,
                fit.nbar_st_fit);
    std::fflush(stdout);
    if (fit.w_fit > best_w) {
      best_w = fit.w_fit;
      best_omega = omega;
    }
  }
  const bool mag = best_w >= 0.005 && best_w <= 0.02;
  const bool loc = best_omega >= 0.3 && best_omega <= 0.5;
  detail = fmt("max W_fit=%.4e at omega=%.4f (magnitude in [5e-3,2e-2]=%s, argmax in "
               "[0.3,0.5]=%s)",
               best_w, best_omega, mag ? "yes" : "no", loc ? "yes" : "no");
  return mag && loc;
}

// --- 7: the two rate formulas trade places across the coupling range --------

bool check_crossover(std::string& detail) {
  const auto& weak_traj = production_run(0.05, 0.1, kWeakHorizon);
  const auto weak_fit = analytics::fit_cooling_curve(weak_traj.times, weak_traj.nbar);
  const auto weak_p = production_params(0.05, 0.1);
  const double weak_wsc_dev =
      std::abs(weak_fit.w_fit - analytics::wsc_prediction(weak_p).w) / weak_fit.w_fit;
  const double weak_ssc_dev =
      std::abs(weak_fit.w_fit - analytics::ssc_prediction(weak_p).w) / weak_fit.w_fit;

  const auto& strong_traj = production_run(0.5, 0.1, kHorizon);
  const auto strong_fit = analytics::fit_cooling_curve(strong_traj.times, strong_traj.nbar);
  const auto strong_p = production_params(0.5, 0.1);
  const double strong_wsc_dev =
      std::abs(strong_fit.w_fit - analytics::wsc_prediction(strong_p).w) / strong_fit.w_fit;
  const double strong_ssc_dev =
      std::abs(strong_fit.w_fit - analytics::ssc_prediction(strong_p).w) / strong_fit.w_fit;

  const bool weak_ok = weak_wsc_dev <= 0.4 && weak_ssc_dev > 0.4;
  const bool strong_ok = strong_ssc_dev <= 0.4 && strong_wsc_dev > 0.4;
  detail = fmt("omega=0.05: wsc dev=%.3f (<=0.4) ssc dev=%.3f (>0.4); omega=0.5: ssc dev=%.3f "
               "(<=0.4) wsc dev=%.3f (>0.4)",
               weak_wsc_dev, weak_ssc_dev, strong_ssc_dev, strong_wsc_dev);
  return weak_ok && strong_ok;
}

// --- 8: fitted rate grows with linewidth while the weak formula shrinks -----

bool check_linewidth_trend(std::string& detail) {
  const std::array<double, 3> gammas{0.05, 0.1, 0.2};
  std::array<double, 3> w_fit{}, w_wsc{};
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const auto& traj = production_run(0.5, gammas[i], kHorizon);
    w_fit[i] = analytics::fit_cooling_curve(traj.times, traj.nbar).w_fit;
    w_wsc[i] = analytics::wsc_prediction(production_params(0.5, gammas[i])).w;
  }
  const bool fit_up = w_fit[0] < w_fit[1] && w_fit[1] < w_fit[2];
  const bool wsc_down = w_wsc[0] > w_wsc[1] && w_wsc[1] > w_wsc[2];
  detail = fmt("W_fit={%.3e, %.3e, %.3e} increasing=%s; W_wsc={%.3e, %.3e, %.3e} decreasing=%s",
               w_fit[0], w_fit[1], w_fit[2], fit_up ? "yes" : "no", w_wsc[0], w_wsc[1], w_wsc[2],
               wsc_down ? "yes" : "no");
  return fit_up && wsc_down;
}

// --- 9: resonant tier vs the full chain on subspace populations -------------

bool check_tier_equivalence(std::string& detail) {
  const auto p = production_params(0.5, 0.1);
  const model::FockSpace space(kCutoff);
  const auto tier = model::build_tier(p, space, model::TierTag::RwaDressed);
  const auto rho0 = model::thermal_initial_state(p, space);

  const double t_final = 2000.0;
  const std::size_t samples = 200;
  dynamics::EvolveOptions opts;
  opts.samples = samples;
  opts.rel_tol = kRelTol;
  opts.record_subspace_pops = true;
  const auto traj = dynamics::evolve(rho0, tier, t_final, opts);

  const auto m = analytics::rate_model(p, kCutoff, analytics::RateVariant::Full);
  const auto rt =
      analytics::rate_evolve(m, dynamics::dressed_subspace_populations(rho0, p), t_final, samples);

  double dev = 0.0;
  std::size_t dev_n = 0;
  double dev_t = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    if (std::abs(traj.times[k] - rt.times[k]) > 1e-9) {
      detail = "sampling grids disagree";
      return false;
    }
    for (std::size_t n = 0; n <= kCutoff; ++n) {
      const double d = std::abs(traj.subspace_pops[k][n] - rt.populations[k][n]);
      if (d > dev) {
        dev = d;
        dev_n = n;
        dev_t = traj.times[k];
      }
    }
  }
  detail = fmt("max|p_n(sim) - p_n(chain)|=%.4f (<=0.05, worst at n=%zu, t=%.0f)", dev, dev_n,
               dev_t);
  return dev <= 0.05;
}

// --- 10: numerical kernel invariants, re-checked at the gate ----------------

bool check_kernel_properties(std::string& detail) {
  std::vector<std::string> bad;
  auto expect = [&bad](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };

  const auto rule = numkit::gauss_legendre(32);
  double sw = 0.0, su2 = 0.0, su62 = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    sw += rule.weights[j];
    su2 += rule.weights[j] * rule.nodes[j] * rule.nodes[j];
    su62 += rule.weights[j] * std::pow(rule.nodes[j], 62);
  }
  expect(std::abs(sw - 2.0) <= 1e-13, "quadrature normalization");
  expect(std::abs(su2 - 2.0 / 3.0) <= 1e-13, "quadrature degree-2 exactness");
  expect(std::abs(su62 - 2.0 / 63.0) <= 1e-13, "quadrature degree-62 exactness");

  for (double omega : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto p = production_params(omega, 0.1);
    const auto b = analytics::dressed_basis(p.delta, p.omega);
    expect(std::abs(b.omega_plus + b.omega_minus + p.delta) <= 1e-12, "dressed eigenvalue sum");
    expect(std::abs(b.omega_plus * b.omega_minus + p.omega * p.omega / 4.0) <= 1e-12,
           "dressed eigenvalue product");
    const auto dr = analytics::dressed_rates(p);
    expect(std::abs(dr.gamma_minus + dr.gamma_plus + 2.0 * dr.gamma_phi - p.gamma) <= 1e-14,
           "dressed rate sum");
    const double spectral = 0.25 * (dr.beta + 1.0 / dr.beta) - 0.5;
    const double balance = dr.gamma_plus / (dr.gamma_minus - dr.gamma_plus);
    expect(std::abs(spectral - balance) <= 1e-12, "plateau dual form");
  }

  {
    std::vector<double> t(300), y(300);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = 5000.0 * static_cast<double>(i) / 299.0;
      y[i] = 9.5 * std::exp(-4.2e-3 * t[i]) + 7.0e-3;
    }
    const auto fit = analytics::fit_cooling_curve(t, y);
    expect(std::abs(fit.w_fit - 4.2e-3) <= 1e-6 * 4.2e-3, "fit rate recovery");
    expect(std::abs(fit.nbar_st_fit - 7.0e-3) <= 1e-6, "fit plateau recovery");
    expect(fit.converged && !fit.low_identifiability, "fit health flags");
  }

  {
    numkit::ComplexMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        g(i, j) = numkit::cplx(0.1 * static_cast<double>(i + j), 0.3 * static_cast<double>(i) -
                                                                     0.3 * static_cast<double>(j));
    // anti-Hermitian generator -> exact unitary
    numkit::ComplexMatrix ah(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) ah(i, j) = 0.5 * (g(i, j) - std::conj(g(j, i)));
    const auto u = numkit::expm(ah);
    const auto gram = numkit::matmul(u.adjoint(), u);
    double unit_dev = 0.0;
    const auto eye = numkit::ComplexMatrix::identity(8);
    for (std::size_t k = 0; k < gram.a.size(); ++k)
      unit_dev = std::max(unit_dev, std::abs(gram.a[k] - eye.a[k]));
    expect(unit_dev <= 1e-12, "matrix exponential unitarity");
  }

  if (bad.empty()) {
    detail = "quadrature, dressed-spectrum, rate-identity, fit-recovery, expm checks all hold";
    return true;
  }
  detail = "failed:";
  for (const auto& b : bad) detail += " " + b + ";";
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

  struct Entry {
    int id;
    const char* name;
    bool (*fn)(std::string&);
  };
  const Entry entries[] = {
      {1, "jump completeness", check_jump_completeness},
      {2, "conservation audit", check_conservation},
      {3, "scaled-chain closed form", check_rate_closed_form},
      {4, "steady-state distribution", check_steady_state},
      {5, "strong-coupling rate agreement", check_strong_coupling},
      {6, "peak cooling rate", check_peak_rate},
      {7, "regime crossover", check_crossover},
      {8, "linewidth trend", check_linewidth_trend},
      {9, "tier equivalence", check_tier_equivalence},
      {10, "kernel properties", check_kernel_properties},
  };

  int ran = 0, failed = 0;
  for (const auto& e : entries) {
    if (only != 0 && e.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = e.fn(detail);
    } catch (const std::exception& ex) {
      detail = fmt("exception: %s", ex.what());
    }
    std::printf("C%d %s %s: %s  [%.1f s]\n", e.id, ok ? "PASS" : "FAIL", e.name, detail.c_str(),
                elapsed_since(t0));
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion\n");
    return 64;
  }
  std::printf("RESULT %d/%d passed\n", ran - failed, ran);
  return failed;
}
