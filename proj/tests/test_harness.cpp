#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fraclap/harness.hpp"

using namespace fraclap;

TEST_CASE("order fit recovers exact power laws") {
  std::vector<double> eps, r;
  for (int k = 0; k < 8; ++k) {
    eps.push_back(0.1 * std::pow(0.5, k));
    r.push_back(-3.0 * std::pow(eps.back(), 1.7));
  }
  const auto f = fit_order(eps, r);
  CHECK(f.order == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.points == 8);
  CHECK_FALSE(f.infinite);
}

TEST_CASE("order fit tolerates noise and picks the dominant power") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<double> eps, noisy, mixed;
  for (int k = 0; k < 10; ++k) {
    const double e = 0.05 * std::pow(2.0, -0.5 * k);
    eps.push_back(e);
    noisy.push_back(std::pow(e, 2.2) * (1 + g(rng)));
    mixed.push_back(std::pow(e, 1.5) + 1e-3 * std::pow(e, 3.0));
  }
  CHECK(fit_order(eps, noisy).order == doctest::Approx(2.2).epsilon(0.05 / 2.2));
  CHECK(fit_order(eps, mixed).order == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("order fit edge cases") {
  const std::vector<double> eps{0.1, 0.05, 0.025};
  const auto z = fit_order(eps, {0.0, 0.0, 0.0});
  CHECK(z.infinite);
  CHECK(std::isinf(z.order));
  CHECK_THROWS_AS(fit_order({0.1, 0.05}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(fit_order(eps, {1.0, 2.0}), DomainError);
}

TEST_CASE("default eps grid") {
  const auto g = default_eps_grid(0.5, 12);
  REQUIRE(g.size() == 12);
  CHECK(g.front() == 0.125);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1] / g[i] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("average names round-trip") {
  for (auto k : {AverageKind::mvp1, AverageKind::mvp2, AverageKind::mvp3, AverageKind::midpoint, AverageKind::ball_mean})
    CHECK(parse_average(to_string(k)) == k);
  CHECK_THROWS_AS(parse_average("mvp4"), DomainError);
}

TEST_CASE("sweep rows obey the report algebra") {
  SweepConfig cfg;
  cfg.entry = "cosine";
  cfg.s_values = {0.6, 0.9};
  cfg.n_eps = 6;
  cfg.threads = 2;
  const auto rep = run_sweep(cfg);
  REQUIRE(rep.rows.size() == 12);
  REQUIRE(rep.series.size() == 2);
  for (const auto& r : rep.rows) {
    CAPTURE(r.s);
    CAPTURE(r.eps);
    CHECK(r.error.empty());
    CHECK(r.deviation == r.value - r.phi_x);
    CHECK(r.residual == r.deviation - r.predicted);
    CHECK(r.bound_name == "expansion_o");
    CHECK(r.margin == r.bound + r.allowance - std::abs(r.residual));
    CHECK(r.pass == (r.margin >= 0));
  }
  for (const auto& s : rep.series) {
    REQUIRE(s.expected_order);
    CHECK(*s.expected_order == thm1_order(s.s));
  }
  CHECK(rep.pass);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig cfg;
  cfg.entry = "gaussian:b=1,0.3;x=0.5,0.4";
  cfg.average = AverageKind::mvp2;
  cfg.n_eps = 4;
  cfg.threads = 1;
  const auto a = run_sweep(cfg);
  cfg.threads = 3;
  const auto b = run_sweep(cfg);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("ball mean follows the Laplacian") {
  SweepConfig cfg;
  cfg.entry = "gaussian:b=1,0.3;x=0.5,0.4";
  cfg.average = AverageKind::ball_mean;
  cfg.eps = {0.02, 0.01};
  const auto rep = run_sweep(cfg);
  for (const auto& r : rep.rows) CHECK(r.deviation == doctest::Approx(r.predicted).epsilon(0.01));
}

TEST_CASE("bad sweep input") {
  SweepConfig cfg;
  cfg.eps = {0.1, 0.2};
  CHECK_THROWS_AS(run_sweep(cfg), DomainError);
  cfg.eps = {0.9};
  CHECK_THROWS_AS(run_sweep(cfg), DomainError);
  cfg.eps = {};
  cfg.s_values = {0.4};
  CHECK_THROWS(run_sweep(cfg));
}

TEST_CASE("csv quoting and number format") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::nan("")) == "nan");

  SweepConfig cfg;
  cfg.entry = "cosine:xi=1,0;x=0,0";
  cfg.eps = {0.1, 0.05, 0.025};
  std::ostringstream os;
  write_csv(os, run_sweep(cfg));
  const auto text = os.str();
  CHECK(text.find("\"cosine:xi=1,0;x=0,0\",mvp1,") != std::string::npos);
  CHECK(text.find("\r\n") != std::string::npos);
}

TEST_CASE("audit on a small catalog") {
  AuditConfig cfg;
  cfg.entries = {"cosine", "constant"};
  cfg.s_values = {0.75};
  cfg.n_eps = 3;
  const auto rep = audit_bounds(cfg);
  CHECK(rep.violations == 0);
  CHECK(rep.failures == 0);
  CHECK(rep.skipped == 3);  // the mixed bound needs a nonzero gradient
  CHECK(rep.rows.size() == 18);
  const auto j = to_json(rep);
  CHECK(j["rows"].size() == 18);
  CHECK(j["rows"][0].contains("note") == false);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK(resolve_threads(3) == 3);
}
