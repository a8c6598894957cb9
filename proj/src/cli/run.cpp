#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "csv.hpp"
#include "sscool/analytics/closed_forms.hpp"
#include "sscool/errors.hpp"
#include "sscool/analytics/fitting.hpp"
#include "sscool/cli/run.hpp"
#include "sscool/dynamics/evolve.hpp"
#include "sscool/model/tiers.hpp"
#include "svg.hpp"

namespace sscool::cli {

namespace {

namespace fs = std::filesystem;
using model::IonParams;

constexpr double kAbsTol = 1e-10;
constexpr std::size_t kQuadPoints = 32;

struct Cfg {
  IonParams p;
  std::size_t cutoff = 70;
  std::string tier = "exact";
  double t_final = 0.0;
  std::size_t samples = 400;
  double rel_tol = 1e-8;
  std::string axis = "omega";
  std::string grid;
  std::string out = ".";
  std::size_t workers = 0;
  long long seed = 0;

  bool delta_set = false, t_final_set = false, grid_set = false, n0_set = false;
};

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

model::TierTag tier_tag(const std::string& s) {
  if (s == "exact") return model::TierTag::Exact;
  if (s == "ld") return model::TierTag::LambDicke;
  if (s == "rwa") return model::TierTag::RwaDressed;
  throw contract_error("unknown tier: " + s);
}

// a:b:count linspace, or a comma-separated list; strictly increasing.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> g;
  try {
    if (s.find(':') != std::string::npos) {
      std::istringstream is(s);
      std::string a, b, c;
      if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
        throw contract_error("grid: expected start:stop:count");
      const double lo = std::stod(a), hi = std::stod(b);
      const long n = std::stol(c);
      if (n < 1) throw contract_error("grid: count must be >= 1");
      if (n == 1) {
        g.push_back(lo);
      } else {
        for (long i = 0; i < n; ++i)
          g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    } else {
      std::istringstream is(s);
      std::string tok;
      while (std::getline(is, tok, ',')) {
        if (!tok.empty()) g.push_back(std::stod(tok));
      }
    }
  } catch (const contract_error&) {
    throw;
  } catch (const std::exception&) {
    throw contract_error("grid: cannot parse '" + s + "'");
  }
  if (g.empty()) throw contract_error("grid: empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw contract_error("grid values must be strictly increasing");
  return g;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

double auto_t_final(const IonParams& p) {
  const double cap = 5000.0 / p.nu;
  if (p.omega > 0 && p.omega < p.nu && p.n0 > 0) {
    const double w = analytics::ssc_approx_prediction(p).w;
    return std::min(8.0 / w, cap);
  }
  return cap;
}

std::string provenance(const std::string& verb, const IonParams& p, const Cfg& cfg,
                       double t_final_resolved, const std::string& extra) {
  std::ostringstream os;
  os << "# params: verb=" << verb << " nu=" << fmtg(p.nu) << " gamma=" << fmtg(p.gamma)
     << " omega=" << fmtg(p.omega) << " delta=" << fmtg(p.delta) << " eta=" << fmtg(p.eta)
     << " n0=" << fmtg(p.n0) << " pattern=dipole cutoff=" << cfg.cutoff << " tier=" << cfg.tier
     << " t_final=" << (cfg.t_final_set ? fmtg(cfg.t_final) : std::string("auto"))
     << " t_final_resolved=" << fmtg(t_final_resolved) << " samples=" << cfg.samples
     << " rel_tol=" << fmtg(cfg.rel_tol) << " abs_tol=" << fmtg(kAbsTol)
     << " quad_points=" << kQuadPoints << " workers=" << cfg.workers << " seed=" << cfg.seed;
  if (!extra.empty()) os << ' ' << extra;
  os << " version=" << version_string;
  return os.str();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw contract_error("cannot create output directory " + dir + ": " + ec.message());
}

void probe_writable(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw contract_error("output path not writable: " + path);
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t k = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  k = std::min(k, n);
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (std::size_t w = 0; w < k; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

dynamics::CoolingTrajectory run_trajectory(const IonParams& p, const Cfg& cfg, double t_final) {
  model::FockSpace space(cfg.cutoff);
  const auto tier = model::build_tier(p, space, tier_tag(cfg.tier), kQuadPoints);
  const auto rho0 = model::thermal_initial_state(p, space);
  dynamics::EvolveOptions eo;
  eo.samples = cfg.samples;
  eo.rel_tol = cfg.rel_tol;
  eo.abs_tol = kAbsTol;
  return dynamics::evolve(rho0, tier, t_final, eo);
}

// ---------------------------------------------------------------- simulate

int do_simulate(Cfg cfg) {
  IonParams p = cfg.p;
  p.validate();
  if (!cfg.delta_set) p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
  if (cfg.t_final_set && !(cfg.t_final > 0)) throw contract_error("t-final must be > 0");
  const double tf = cfg.t_final_set ? cfg.t_final : auto_t_final(p);

  ensure_out_dir(cfg.out);
  const std::string csv_path = (fs::path(cfg.out) / "nbar_t.csv").string();
  const std::string svg_path = (fs::path(cfg.out) / "nbar_t.svg").string();
  probe_writable(csv_path);

  const auto traj = run_trajectory(p, cfg, tf);

  std::vector<std::vector<double>> rows(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    rows[i] = {traj.times[i], traj.nbar[i], traj.p_excited[i]};
  write_text_file(csv_path, csv_table({provenance("simulate", p, cfg, tf, "")},
                                      "time,nbar,p_excited", rows));

  std::vector<Series> series;
  series.push_back({traj.times, traj.nbar, "simulated", false});
  if (p.omega > 0 && p.omega < p.nu && p.n0 > 0) {
    const auto ssc = analytics::ssc_prediction(p);
    const auto wsc = analytics::wsc_prediction(p);
    const double n_init = traj.nbar.front();
    Series s33{traj.times, {}, "rate model", true}, swsc{traj.times, {}, "weak-coupling", true};
    for (double t : traj.times) {
      s33.y.push_back(ssc.nbar_st + (n_init - ssc.nbar_st) * std::exp(-ssc.w * t));
      swsc.y.push_back(wsc.nbar_st + (n_init - wsc.nbar_st) * std::exp(-wsc.w * t));
    }
    series.push_back(std::move(s33));
    series.push_back(std::move(swsc));
  }
  write_text_file(svg_path, svg_plot(series, true, "time [1/nu]", "mean phonon number"));

  std::cout << "wrote " << csv_path << " (" << traj.times.size()
            << " samples, final nbar=" << fmtg(traj.nbar.back()) << ")\n";
  std::cout << "wrote " << svg_path << "\n";
  return 0;
}

// ------------------------------------------------------------------ sweep

struct SweepRow {
  double axis_value = 0.0;
  double w_fit = 0.0, nbar_st_fit = 0.0;
  double w_ssc = 0.0, w_ssc_approx = 0.0, w_wsc = 0.0, nbar_ssc = 0.0, nbar_wsc = 0.0;
  double residual = 0.0;
  bool failed = false;
};

std::vector<double> default_grid(const std::string& axis) {
  if (axis == "omega") return linspace(0.05, 0.6, 24);
  if (axis == "eta") return linspace(0.02, 0.2, 10);
  if (axis == "gamma") return linspace(0.03, 0.3, 10);
  return linspace(2.0, 12.0, 6);  // n0
}

IonParams point_params(const IonParams& base, const std::string& axis, double value) {
  IonParams p = base;
  if (axis == "omega")
    p.omega = value;
  else if (axis == "eta")
    p.eta = value;
  else if (axis == "gamma")
    p.gamma = value;
  else if (axis == "n0")
    p.n0 = value;
  else
    throw contract_error("axis must be one of omega, eta, gamma, n0");
  return p;
}

std::vector<SweepRow> sweep_points(const Cfg& cfg, const std::string& axis,
                                   const std::vector<double>& grid, std::size_t& failures) {
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> failed{0};
  parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
    SweepRow& r = rows[i];
    r.axis_value = grid[i];
    try {
      IonParams p = point_params(cfg.p, axis, grid[i]);
      p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
      const double tf = cfg.t_final_set ? cfg.t_final : auto_t_final(p);
      const auto traj = run_trajectory(p, cfg, tf);
      const auto fit = analytics::fit_cooling_curve(traj.times, traj.nbar, 20.0 / p.nu);
      const auto ssc = analytics::ssc_prediction(p);
      const auto approx = analytics::ssc_approx_prediction(p);
      const auto wsc = analytics::wsc_prediction(p);
      r.w_fit = fit.w_fit;
      r.nbar_st_fit = fit.nbar_st_fit;
      r.w_ssc = ssc.w;
      r.w_ssc_approx = approx.w;
      r.w_wsc = wsc.w;
      r.nbar_ssc = ssc.nbar_st;
      r.nbar_wsc = wsc.nbar_st;
      r.residual = fit.residual_norm;
    } catch (const std::exception&) {
      const double nan = std::nan("");
      r.w_fit = r.nbar_st_fit = r.w_ssc = r.w_ssc_approx = r.w_wsc = nan;
      r.nbar_ssc = r.nbar_wsc = r.residual = nan;
      r.failed = true;
      failed.fetch_add(1);
    }
  });
  failures = failed.load();
  return rows;
}

std::vector<std::vector<double>> sweep_csv_rows(const std::vector<SweepRow>& rows) {
  std::vector<std::vector<double>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out[i] = {r.axis_value, r.w_fit, r.nbar_st_fit, r.w_ssc, r.w_ssc_approx,
              r.w_wsc,      r.nbar_ssc, r.nbar_wsc, r.residual};
  }
  return out;
}

constexpr const char* kSweepHeader =
    "axis,w_fit,nbar_st_fit,w_ssc,w_ssc_approx,w_wsc,nbar_ssc,nbar_wsc,residual";

std::string grid_note(const std::vector<double>& grid) {
  std::string s = "grid=";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) s += ',';
    s += fmtg(grid[i]);
  }
  return s;
}

int do_sweep(Cfg cfg) {
  cfg.p.validate();
  if (cfg.axis != "omega" && cfg.axis != "eta" && cfg.axis != "gamma" && cfg.axis != "n0")
    throw contract_error("axis must be one of omega, eta, gamma, n0");
  const std::vector<double> grid = cfg.grid_set ? parse_grid(cfg.grid) : default_grid(cfg.axis);
  if (cfg.axis == "omega") {
    if (grid.back() >= cfg.p.nu)
      throw contract_error("omega grid must stay below nu for the resonance detuning");
  } else if (!(cfg.p.omega < cfg.p.nu)) {
    throw contract_error("omega must be below nu for the resonance detuning");
  }
  if (cfg.t_final_set && !(cfg.t_final > 0)) throw contract_error("t-final must be > 0");

  ensure_out_dir(cfg.out);
  const std::string csv_path = (fs::path(cfg.out) / ("sweep_" + cfg.axis + ".csv")).string();
  probe_writable(csv_path);

  std::size_t failures = 0;
  const auto rows = sweep_points(cfg, cfg.axis, grid, failures);
  write_text_file(csv_path,
                  csv_table({provenance("sweep", cfg.p, cfg, cfg.t_final_set ? cfg.t_final : 0.0,
                                        "axis=" + cfg.axis + " " + grid_note(grid))},
                            kSweepHeader, sweep_csv_rows(rows)));
  std::cout << "wrote " << csv_path << " (" << grid.size() << " points, " << failures
            << " failed)\n";
  if (10 * failures >= 3 * grid.size()) {
    std::cerr << "sweep: " << failures << "/" << grid.size() << " points failed\n";
    return 4;
  }
  return 0;
}

// -------------------------------------------------------------- analytics

int do_analytics(const Cfg& cfg) {
  IonParams p = cfg.p;
  p.validate();
  if (!(p.omega < p.nu))
    throw contract_error("omega must be below nu: the dressed analysis needs omega < nu");

  const auto r = analytics::dressed_rates(p);
  const double delta_ssc = analytics::ssc_resonance_delta(p.nu, p.omega);
  const auto wsc = analytics::wsc_prediction(p);

  nlohmann::json j;
  j["beta"] = r.beta;
  j["gamma_minus"] = r.gamma_minus;
  j["gamma_plus"] = r.gamma_plus;
  j["gamma_phi"] = r.gamma_phi;
  j["delta_ssc"] = delta_ssc;
  j["nbar_st_wsc"] = wsc.nbar_st;
  j["w_wsc"] = wsc.w;

  std::ostringstream text;
  auto line = [&text](const char* k, double v) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%-14s %.16e\n", k, v);
    text << buf;
  };
  line("beta", r.beta);
  line("gamma_minus", r.gamma_minus);
  line("gamma_plus", r.gamma_plus);
  line("gamma_phi", r.gamma_phi);
  line("delta_ssc", delta_ssc);

  if (p.omega == 0) {
    const char* reason = "beta=1 carrier-free limit; use WSC";
    j["reason_w_ssc"] = reason;
    text << "w_ssc          omitted: " << reason << "\n";
  } else if (!(p.n0 > 0)) {
    const char* reason = "n0=0: no initial occupation to cool";
    j["reason_w_ssc"] = reason;
    text << "w_ssc          omitted: " << reason << "\n";
  } else {
    const auto ssc = analytics::ssc_prediction(p);
    const auto approx = analytics::ssc_approx_prediction(p);
    j["w_ssc"] = ssc.w;
    j["w_ssc_approx"] = approx.w;
    j["nbar_st_ssc"] = ssc.nbar_st;
    line("w_ssc", ssc.w);
    line("w_ssc_approx", approx.w);
    line("nbar_st_ssc", ssc.nbar_st);
  }
  line("nbar_st_wsc", wsc.nbar_st);
  line("w_wsc", wsc.w);

  ensure_out_dir(cfg.out);
  const std::string json_path = (fs::path(cfg.out) / "analytics.json").string();
  write_text_file(json_path, j.dump(2) + "\n");
  std::cout << text.str();
  std::cout << "wrote " << json_path << "\n";
  return 0;
}

// -------------------------------------------------------------- reproduce

std::string num_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// filesystem-safe variant for filenames
std::string num_tag(double v) {
  std::string s = num_short(v);
  for (auto& c : s)
    if (c == '.') c = 'p';
  return s;
}

int do_fig2(Cfg cfg) {
  const std::string dir = (fs::path(cfg.out) / "fig2").string();
  ensure_out_dir(dir);
  probe_writable((fs::path(dir) / "summary.txt").string());
  const std::vector<double> grid =
      cfg.grid_set ? parse_grid(cfg.grid) : std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5};
  if (grid.back() >= cfg.p.nu) throw contract_error("omega grid must stay below nu");

  struct Curve {
    double omega = 0.0;
    dynamics::CoolingTrajectory traj;
    analytics::CoolingFit fit;
    analytics::CoolingPrediction ssc;
  };
  std::vector<Curve> curves(grid.size());
  std::vector<std::exception_ptr> errs(grid.size());
  parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
    try {
      IonParams p = cfg.p;
      p.omega = grid[i];
      if (!cfg.delta_set) p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
      const double tf = cfg.t_final_set ? cfg.t_final : auto_t_final(p);
      curves[i].omega = grid[i];
      curves[i].traj = run_trajectory(p, cfg, tf);
      curves[i].fit =
          analytics::fit_cooling_curve(curves[i].traj.times, curves[i].traj.nbar, 20.0 / p.nu);
      curves[i].ssc = analytics::ssc_prediction(p);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  std::vector<Series> series;
  std::ostringstream summary;
  summary << "mean phonon number vs time at the red-sideband resonance\n";
  for (const auto& c : curves) {
    Cfg pc = cfg;
    IonParams p = cfg.p;
    p.omega = c.omega;
    if (!cfg.delta_set) p.delta = analytics::ssc_resonance_delta(p.nu, p.omega);
    std::vector<std::vector<double>> rows(c.traj.times.size());
    for (std::size_t i = 0; i < c.traj.times.size(); ++i)
      rows[i] = {c.traj.times[i], c.traj.nbar[i], c.traj.p_excited[i]};
    const std::string path =
        (fs::path(dir) / ("nbar_t_omega_" + num_tag(c.omega) + ".csv")).string();
    write_text_file(path, csv_table({provenance("reproduce-fig2", p, pc,
                                                c.traj.times.back(), "")},
                                    "time,nbar,p_excited", rows));

    series.push_back({c.traj.times, c.traj.nbar, "omega=" + num_short(c.omega), false});
    Series comp{c.traj.times, {}, "", true};
    const double n0v = c.traj.nbar.front();
    for (double t : c.traj.times)
      comp.y.push_back(c.ssc.nbar_st + (n0v - c.ssc.nbar_st) * std::exp(-c.ssc.w * t));
    series.push_back(std::move(comp));

    const double dev = std::abs(c.fit.w_fit - c.ssc.w) / c.ssc.w;
    summary << "omega=" << num_short(c.omega) << " w_fit=" << fmtg(c.fit.w_fit)
            << " w_rate_model=" << fmtg(c.ssc.w) << " rel_dev=" << fmtg(dev)
            << " nbar_st_fit=" << fmtg(c.fit.nbar_st_fit)
            << " nbar_st_rate_model=" << fmtg(c.ssc.nbar_st) << "\n";
  }
  write_text_file((fs::path(dir) / "fig2.svg").string(),
                  svg_plot(series, true, "time [1/nu]", "mean phonon number"));
  write_text_file((fs::path(dir) / "summary.txt").string(), summary.str());
  std::cout << "wrote " << dir << " bundle (" << grid.size() << " curves)\n";
  return 0;
}

int do_fig3(Cfg cfg, bool rates_panel) {
  const std::string name = rates_panel ? "fig3a" : "fig3b";
  const std::string dir = (fs::path(cfg.out) / name).string();
  ensure_out_dir(dir);
  probe_writable((fs::path(dir) / "summary.txt").string());
  const std::vector<double> grid = cfg.grid_set ? parse_grid(cfg.grid) : linspace(0.05, 0.6, 24);
  if (grid.back() >= cfg.p.nu) throw contract_error("omega grid must stay below nu");

  const std::vector<double> n0s =
      rates_panel ? (cfg.n0_set ? std::vector<double>{cfg.p.n0} : std::vector<double>{10, 6, 2})
                  : std::vector<double>{cfg.p.n0};

  std::vector<Series> series;
  std::ostringstream summary;
  summary << (rates_panel ? "cooling rate vs coupling strength\n"
                          : "steady-state occupation vs coupling strength\n");
  bool quorum_failed = false;
  for (double n0 : n0s) {
    Cfg c = cfg;
    c.p.n0 = n0;
    std::size_t failures = 0;
    const auto rows = sweep_points(c, "omega", grid, failures);
    const std::string path =
        (fs::path(dir) /
         (rates_panel ? "sweep_omega_n0_" + num_tag(n0) + ".csv" : std::string("sweep_omega.csv")))
            .string();
    write_text_file(path, csv_table({provenance("reproduce-" + name, c.p, c, 0.0,
                                                "axis=omega " + grid_note(grid))},
                                    kSweepHeader, sweep_csv_rows(rows)));
    if (10 * failures >= 3 * grid.size()) quorum_failed = true;

    Series fitted{{}, {}, "", false}, companion{{}, {}, "", true}, wsc_line{{}, {}, "", true};
    double max_dev = 0.0;
    for (const auto& r : rows) {
      fitted.x.push_back(r.axis_value);
      companion.x.push_back(r.axis_value);
      if (rates_panel) {
        fitted.y.push_back(r.w_fit);
        companion.y.push_back(r.w_ssc);
        if (!r.failed && r.w_ssc > 0)
          max_dev = std::max(max_dev, std::abs(r.w_fit - r.w_ssc) / r.w_ssc);
      } else {
        fitted.y.push_back(r.nbar_st_fit);
        companion.y.push_back(r.nbar_ssc);
        wsc_line.x.push_back(r.axis_value);
        wsc_line.y.push_back(r.nbar_wsc);
        if (!r.failed && r.nbar_ssc > 0)
          max_dev = std::max(max_dev, std::abs(r.nbar_st_fit - r.nbar_ssc) / r.nbar_ssc);
      }
    }
    fitted.label = rates_panel ? "w_fit n0=" + num_short(n0) : "nbar_st fit";
    companion.label = rates_panel ? "rate model" : "dressed-rate prediction";
    series.push_back(std::move(fitted));
    series.push_back(std::move(companion));
    if (!rates_panel) {
      wsc_line.label = "weak-coupling prediction";
      series.push_back(std::move(wsc_line));
    }
    summary << "n0=" << num_short(n0) << " points=" << grid.size() << " failures=" << failures
            << " max_rel_dev_vs_prediction=" << fmtg(max_dev) << "\n";
  }
  write_text_file((fs::path(dir) / (name + ".svg")).string(),
                  svg_plot(series, !rates_panel, "omega [nu]",
                           rates_panel ? "cooling rate [nu]" : "steady-state phonon number"));
  write_text_file((fs::path(dir) / "summary.txt").string(), summary.str());
  std::cout << "wrote " << dir << " bundle\n";
  return quorum_failed ? 4 : 0;
}

int do_fig4(Cfg cfg, bool eta_panel) {
  const std::string name = eta_panel ? "fig4a" : "fig4b";
  const std::string axis = eta_panel ? "eta" : "gamma";
  const std::string dir = (fs::path(cfg.out) / name).string();
  ensure_out_dir(dir);
  probe_writable((fs::path(dir) / "summary.txt").string());
  if (!(cfg.p.omega < cfg.p.nu)) throw contract_error("omega must be below nu");
  const std::vector<double> grid = cfg.grid_set ? parse_grid(cfg.grid) : default_grid(axis);

  std::size_t failures = 0;
  const auto rows = sweep_points(cfg, axis, grid, failures);
  write_text_file((fs::path(dir) / ("sweep_" + axis + ".csv")).string(),
                  csv_table({provenance("reproduce-" + name, cfg.p, cfg, 0.0,
                                        "axis=" + axis + " " + grid_note(grid))},
                            kSweepHeader, sweep_csv_rows(rows)));

  Series fitted{{}, {}, "w_fit", false}, companion{{}, {}, "", true};
  std::ostringstream summary;
  for (const auto& r : rows) {
    fitted.x.push_back(r.axis_value);
    fitted.y.push_back(r.w_fit);
    companion.x.push_back(r.axis_value);
    companion.y.push_back(eta_panel ? r.w_ssc : r.w_wsc);
  }
  companion.label = eta_panel ? "dressed-rate prediction" : "weak-coupling prediction";
  if (eta_panel) {
    summary << "cooling rate vs Lamb-Dicke parameter (coupling-independent prediction)\n";
    for (const auto& r : rows)
      summary << "eta=" << num_short(r.axis_value) << " w_fit=" << fmtg(r.w_fit)
              << " w_prediction=" << fmtg(r.w_ssc) << " rel_dev="
              << fmtg(r.w_ssc > 0 ? std::abs(r.w_fit - r.w_ssc) / r.w_ssc : std::nan("")) << "\n";
  } else {
    summary << "cooling rate vs linewidth\n";
    bool fit_up = true, wsc_down = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!(rows[i].w_fit > rows[i - 1].w_fit)) fit_up = false;
      if (!(rows[i].w_wsc < rows[i - 1].w_wsc)) wsc_down = false;
    }
    for (const auto& r : rows)
      summary << "gamma=" << num_short(r.axis_value) << " w_fit=" << fmtg(r.w_fit)
              << " w_weak_coupling=" << fmtg(r.w_wsc) << "\n";
    summary << "w_fit monotone increasing: " << (fit_up ? "yes" : "no") << "\n";
    summary << "w_wsc monotone decreasing: " << (wsc_down ? "yes" : "no") << "\n";
  }
  summary << "failures=" << failures << "/" << grid.size() << "\n";
  write_text_file((fs::path(dir) / (name + ".svg")).string(),
                  svg_plot({fitted, companion}, false,
                           eta_panel ? "eta" : "gamma [nu]", "cooling rate [nu]"));
  write_text_file((fs::path(dir) / "summary.txt").string(), summary.str());
  std::cout << "wrote " << dir << " bundle\n";
  return (10 * failures >= 3 * grid.size()) ? 4 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  static const char* kUsage =
      "usage: sscool <simulate|sweep|analytics|reproduce> [figure] [flags]\n"
      "flags: --nu --gamma --omega --delta --eta --n0 --cutoff --tier --t-final --samples\n"
      "       --rel-tol --axis --grid --out --workers --seed --config FILE\n";
  if (args.empty()) {
    std::cerr << kUsage;
    return 2;
  }
  const std::string verb = args[0];
  if (verb == "help" || verb == "--help" || verb == "-h") {
    std::cout << kUsage;
    return 0;
  }
  if (verb != "simulate" && verb != "sweep" && verb != "analytics" && verb != "reproduce") {
    std::cerr << "unknown verb: " << verb << "\n" << kUsage;
    return 2;
  }

  CLI::App app{"single-ion sideband cooling toolkit"};
  app.set_config("--config", "", "key = value file; explicit flags override it");
  Cfg cfg;
  std::string figure;
  app.add_option("--nu", cfg.p.nu, "trap frequency (unit of every rate)");
  app.add_option("--gamma", cfg.p.gamma, "excited-state linewidth");
  app.add_option("--omega", cfg.p.omega, "carrier coupling strength");
  auto* o_delta =
      app.add_option("--delta", cfg.p.delta, "laser detuning (default: sideband resonance)");
  app.add_option("--eta", cfg.p.eta, "Lamb-Dicke parameter");
  auto* o_n0 = app.add_option("--n0", cfg.p.n0, "initial thermal occupation");
  app.add_option("--cutoff", cfg.cutoff, "phonon-space truncation");
  app.add_option("--tier", cfg.tier, "model tier")
      ->check(CLI::IsMember({"exact", "ld", "rwa"}));
  auto* o_tf = app.add_option("--t-final", cfg.t_final, "evolution span (default: auto)");
  app.add_option("--samples", cfg.samples, "trajectory sample count");
  app.add_option("--rel-tol", cfg.rel_tol, "integrator relative tolerance");
  app.add_option("--axis", cfg.axis, "sweep axis: omega, eta, gamma, n0");
  auto* o_grid = app.add_option("--grid", cfg.grid, "a:b:count or comma list");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--workers", cfg.workers, "sweep worker count (default: cores)");
  app.add_option("--seed", cfg.seed, "noise-injection seed (recorded only)");
  if (verb == "reproduce")
    app.add_option("figure", figure, "fig2, fig3a, fig3b, fig4a, fig4b")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3a", "fig3b", "fig4a", "fig4b"}));

  std::vector<const char*> argv;
  argv.push_back("sscool");
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) ? 2 : 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.delta_set = o_delta->count() > 0;
  cfg.t_final_set = o_tf->count() > 0;
  cfg.grid_set = o_grid->count() > 0;
  cfg.n0_set = o_n0->count() > 0;

  try {
    if (verb == "simulate") return do_simulate(cfg);
    if (verb == "sweep") return do_sweep(cfg);
    if (verb == "analytics") return do_analytics(cfg);
    if (figure == "fig2") return do_fig2(cfg);
    if (figure == "fig3a") return do_fig3(cfg, true);
    if (figure == "fig3b") return do_fig3(cfg, false);
    if (figure == "fig4a") return do_fig4(cfg, true);
    return do_fig4(cfg, false);
  } catch (const contract_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const diagnostic_error& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sscool::cli
