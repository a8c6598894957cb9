#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sscool/cli/run.hpp"

using sscool::cli::run;

namespace {

std::string fresh_dir(const char* tag) {
  static int counter = 0;
  std::string d = std::string("/tmp/sscool_test_") + tag + "_" + std::to_string(counter++);
  std::remove(d.c_str());
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::strtod(tok.c_str(), nullptr));
  return out;
}

// small, fast settings shared by the trajectory-driving cases
const std::vector<std::string> kSmall{"--cutoff", "12", "--n0", "0.8", "--samples", "25"};

std::vector<std::string> with_small(std::vector<std::string> args) {
  args.insert(args.end(), kSmall.begin(), kSmall.end());
  return args;
}

}  // namespace

TEST_CASE("verb and flag validation exits with the config code") {
  CHECK(run({}) == 2);
  CHECK(run({"transmogrify"}) == 2);
  CHECK(run({"help"}) == 0);
  CHECK(run({"simulate", "--no-such-flag", "1"}) == 2);
  CHECK(run({"simulate", "--tier", "bogus"}) == 2);
  CHECK(run({"sweep", "--axis", "bogus"}) == 2);
  CHECK(run({"sweep", "--grid", "0.5,0.4"}) == 2);          // not increasing
  CHECK(run({"sweep", "--grid", "0.5,1.5"}) == 2);          // beyond the trap frequency
  CHECK(run({"simulate", "--t-final", "0"}) == 2);          // explicit zero span
  CHECK(run({"reproduce"}) == 2);                           // figure name required
  CHECK(run({"reproduce", "fig9"}) == 2);
  CHECK(run({"analytics", "--omega", "1.2"}) == 2);         // no dressed analysis past nu
  CHECK(run({"simulate", "--cutoff", "12", "--out", fresh_dir("gate")}) == 2);  // n0=10 tail
}

TEST_CASE("analytics prints the closed forms and round-trips through JSON") {
  const auto dir = fresh_dir("ana");
  REQUIRE(run({"analytics", "--out", dir}) == 0);
  const auto j = nlohmann::json::parse(slurp(dir + "/analytics.json"));
  CHECK(j.at("beta").get<double>() == doctest::Approx(0.8660254037844386).epsilon(1e-14));
  CHECK(j.at("gamma_minus").get<double>() == doctest::Approx(0.0870512701892219).epsilon(1e-12));
  CHECK(j.at("w_ssc").get<double>() == doctest::Approx(3.934439427153e-3).epsilon(1e-10));
  CHECK(j.at("nbar_st_ssc").get<double>() == doctest::Approx(5.18148554092255e-3).epsilon(1e-12));
  CHECK(j.at("delta_ssc").get<double>() == doctest::Approx(-0.8660254037844386).epsilon(1e-14));

  // the carrier-free limit omits the strong-coupling rate with a stated reason
  const auto dir0 = fresh_dir("ana0");
  REQUIRE(run({"analytics", "--omega", "0", "--out", dir0}) == 0);
  const auto j0 = nlohmann::json::parse(slurp(dir0 + "/analytics.json"));
  CHECK_FALSE(j0.contains("w_ssc"));
  CHECK(j0.contains("reason_w_ssc"));
  CHECK(j0.contains("w_wsc"));
}

TEST_CASE("simulate writes a provenance-stamped deterministic table") {
  const auto dir_a = fresh_dir("sim_a");
  const auto args = with_small({"simulate", "--t-final", "60", "--out", dir_a});
  REQUIRE(run(args) == 0);
  const auto text = slurp(dir_a + "/nbar_t.csv");
  const auto rows = lines_of(text);
  REQUIRE(rows.size() == 2 + 25);  // comment, header, samples
  CHECK(rows[0].substr(0, 9) == "# params:");
  for (const char* key : {"verb=simulate", "nu=", "gamma=", "omega=", "delta=", "eta=", "n0=",
                          "cutoff=12", "tier=exact", "t_final=60", "samples=25", "rel_tol=",
                          "abs_tol=", "quad_points=32", "seed=0", "version=sscool 1.0.0"})
    CHECK(rows[0].find(key) != std::string::npos);
  CHECK(rows[1] == "time,nbar,p_excited");
  const auto first = parse_row(rows[2]);
  REQUIRE(first.size() == 3);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == doctest::Approx(0.8).epsilon(1e-2));
  CHECK(first[2] == 0.0);
  const auto last = parse_row(rows.back());
  CHECK(last[1] < first[1]);  // cooling happened

  // byte-identical on a rerun into a different directory
  const auto dir_b = fresh_dir("sim_b");
  REQUIRE(run(with_small({"simulate", "--t-final", "60", "--out", dir_b})) == 0);
  CHECK(slurp(dir_b + "/nbar_t.csv") == text);
  CHECK(slurp(dir_b + "/nbar_t.svg") == slurp(dir_a + "/nbar_t.svg"));
  CHECK(slurp(dir_a + "/nbar_t.svg").find("<svg") != std::string::npos);
}

TEST_CASE("simulate without coupling leaves the ladder untouched") {
  const auto dir = fresh_dir("flat");
  REQUIRE(run(with_small({"simulate", "--omega", "0", "--t-final", "30", "--out", dir})) == 0);
  const auto rows = lines_of(slurp(dir + "/nbar_t.csv"));
  const auto first = parse_row(rows[2]);
  const auto last = parse_row(rows.back());
  CHECK(last[1] == doctest::Approx(first[1]).epsilon(1e-9));
  CHECK(last[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sweep emits sorted rows with companion predictions, independent of workers") {
  const auto dir1 = fresh_dir("sw1");
  const auto base = with_small({"sweep", "--grid", "0.35,0.45,0.55", "--t-final", "60"});
  auto a1 = base;
  a1.insert(a1.end(), {"--workers", "1", "--out", dir1});
  REQUIRE(run(a1) == 0);
  const auto text = slurp(dir1 + "/sweep_omega.csv");
  const auto rows = lines_of(text);
  REQUIRE(rows.size() == 2 + 3);
  CHECK(rows[1] == "axis,w_fit,nbar_st_fit,w_ssc,w_ssc_approx,w_wsc,nbar_ssc,nbar_wsc,residual");
  double prev = -1.0;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const auto r = parse_row(rows[i]);
    REQUIRE(r.size() == 9);
    CHECK(r[0] > prev);
    prev = r[0];
    CHECK(r[1] > 0.0);       // fitted rate
    CHECK(r[3] > 0.0);       // chain-model rate
    CHECK(r[5] > 0.0);       // weak-coupling rate
    CHECK(std::isfinite(r[8]));
  }

  const auto dir3 = fresh_dir("sw3");
  auto a3 = base;
  a3.insert(a3.end(), {"--workers", "3", "--out", dir3});
  REQUIRE(run(a3) == 0);
  // provenance line legitimately records the worker count; the data must not
  auto rows3 = lines_of(slurp(dir3 + "/sweep_omega.csv"));
  REQUIRE(rows3.size() == rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows3[i] == rows[i]);
}

TEST_CASE("sweep converts per-point failures into nan rows and a quorum exit") {
  const auto dir = fresh_dir("swfail");
  // n0=10 with a 12-level ladder trips the truncation gate at every point
  const int code = run({"sweep", "--grid", "0.4,0.5", "--cutoff", "12", "--n0", "10",
                        "--t-final", "40", "--out", dir});
  CHECK(code == 4);
  const auto rows = lines_of(slurp(dir + "/sweep_omega.csv"));
  REQUIRE(rows.size() == 2 + 2);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(rows[i].find("nan") != std::string::npos);
    const auto r = parse_row(rows[i]);
    CHECK(r[0] > 0.0);  // the axis value itself stays real
  }
}

TEST_CASE("config file seeds the parameters and explicit flags override it") {
  const auto dir = fresh_dir("cfg");
  const std::string cfg_path = dir + "_config.ini";
  {
    std::ofstream f(cfg_path);
    f << "omega=0.3\nn0=4\n";
  }
  REQUIRE(run({"analytics", "--config", cfg_path, "--out", dir}) == 0);
  const auto j = nlohmann::json::parse(slurp(dir + "/analytics.json"));
  CHECK(j.at("delta_ssc").get<double>() ==
        doctest::Approx(-std::sqrt(1.0 - 0.09)).epsilon(1e-13));

  const auto dir2 = fresh_dir("cfg2");
  REQUIRE(run({"analytics", "--config", cfg_path, "--omega", "0.5", "--out", dir2}) == 0);
  const auto j2 = nlohmann::json::parse(slurp(dir2 + "/analytics.json"));
  CHECK(j2.at("delta_ssc").get<double>() == doctest::Approx(-0.8660254037844386).epsilon(1e-13));
}

TEST_CASE("reproduce assembles figure bundles with summaries") {
  const auto dir = fresh_dir("fig2");
  auto args = with_small({"reproduce", "fig2", "--grid", "0.45,0.5", "--t-final", "60"});
  args.insert(args.end(), {"--out", dir});
  REQUIRE(run(args) == 0);
  CHECK(slurp(dir + "/fig2/nbar_t_omega_0p45.csv").find("verb=reproduce-fig2") !=
        std::string::npos);
  CHECK(slurp(dir + "/fig2/nbar_t_omega_0p5.csv").find("time,nbar") != std::string::npos);
  CHECK(slurp(dir + "/fig2/fig2.svg").find("<svg") != std::string::npos);
  const auto summary = slurp(dir + "/fig2/summary.txt");
  CHECK(summary.find("omega=0.45") != std::string::npos);
  CHECK(summary.find("rel_dev=") != std::string::npos);

  const auto dir4 = fresh_dir("fig4b");
  auto args4 = with_small({"reproduce", "fig4b", "--grid", "0.08,0.12", "--t-final", "60"});
  args4.insert(args4.end(), {"--out", dir4});
  REQUIRE(run(args4) == 0);
  const auto rows = lines_of(slurp(dir4 + "/fig4b/sweep_gamma.csv"));
  REQUIRE(rows.size() == 2 + 2);
  const auto sum4 = slurp(dir4 + "/fig4b/summary.txt");
  CHECK(sum4.find("monotone") != std::string::npos);
}
