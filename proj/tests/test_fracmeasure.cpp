#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/fracmeasure.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gamma function matches std::tgamma") {
  for (double x : {0.05, 0.3, 0.5, 0.75, 1.0, 1.25, 1.5, 2.2, 3.7, 6.5})
    CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
}

TEST_CASE("C_s gamma formula agrees with the cosine integral") {
  for (int i = 1; i <= 99; ++i) {
    const double s = 0.5 + 0.005 * i;
    if (s >= 1.0) break;
    const double cs = frac_constant_1d(s);
    CHECK(cs > 0.0);
    CHECK(std::abs(cs - frac_constant_1d_by_integral(s)) <= 1e-8 * cs);
    CHECK(std::abs(cs - oracle::frac_constant_by_cosine(s)) <= 1e-8 * cs);
  }
}

TEST_CASE("c_s stays inside the stated interval and C_s = s(1-s)c_s") {
  for (int i = 1; i < 100; ++i) {
    const double s = 0.5 + 0.5 * i / 100.0;
    FracParams fp(s);
    CHECK(fp.small_c() > (12.0 / 13.0) * (12.0 / 13.0));
    CHECK(fp.small_c() < (12.0 / 5.0) * (12.0 / 5.0));
    CHECK(std::abs(fp.big_c() - s * (1.0 - s) * fp.small_c()) <= 4e-16 * fp.big_c());
  }
}

TEST_CASE("out of range order is rejected") {
  CHECK_THROWS_AS(FracParams(0.5), DomainError);
  CHECK_THROWS_AS(FracParams(1.0), DomainError);
  CHECK_THROWS_AS(frac_constant_1d(0.3), DomainError);
  CHECK_THROWS_AS(frac_constant_nd(0, 0.7), DomainError);
}

TEST_CASE("C(N,s)") {
  for (double s : {0.55, 0.7, 0.93}) {
    CHECK(frac_constant_nd(1, s) == frac_constant_1d(s));
    CHECK(frac_constant_nd(3, s) > 0.0);
  }
  // Polar split: int (1 - cos z1)|z|^{-2-2s} dz = int_0^{2pi} |cos th|^{2s} dth * int_0^inf (1-cos u) u^{-1-2s} du.
  const double s = 0.6;
  const double ang = oracle::plain_quad([s](double th) { return std::pow(std::abs(std::cos(th)), 2.0 * s); }, 0.0, kPi / 2) * 4.0;
  const double ref = 1.0 / (ang * oracle::one_minus_cos_integral(s));
  CHECK(frac_constant_nd(2, s) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("mu_mass") {
  for (double s : {0.55, 0.8}) {
    const double eps = 0.3;
    CHECK(mu_mass(s, eps) == doctest::Approx(frac_constant_1d(s) / (2 * s * std::pow(eps, 2 * s))).epsilon(1e-15));
    CHECK(mu_mass(s, eps, eps * (1 + 1e-12)) < 1e-10);
    const double ab = mu_mass(s, 0.2, 0.7), bc = mu_mass(s, 0.7, 3.0), ac = mu_mass(s, 0.2, 3.0);
    CHECK(std::abs(ab + bc - ac) <= 1e-12 * ac);
  }
  const double s = 0.7, cs = frac_constant_1d(s);
  const double ref = oracle::plain_quad([cs](double t) { return cs * std::pow(t, -2.4); }, 0.5, 2.0);
  CHECK(std::abs(mu_mass(s, 0.5, 2.0) - ref) <= 1e-10 * ref);
  CHECK_THROWS_AS(mu_mass(s, 0.0), DivergenceError);
  CHECK_THROWS_AS(mu_mass(s, 1.0, 0.5), DomainError);
}

TEST_CASE("mu_moment") {
  const double s = 0.6, cs = frac_constant_1d(s);
  const double eta = 0.4;
  CHECK(mu_moment(s, 2, 0.0, eta) == doctest::Approx(cs * std::pow(eta, 2 - 2 * s) / (2 - 2 * s)).epsilon(1e-15));
  CHECK(mu_moment(s, 1, 0.3, 0.3) == 0.0);
  const double ref = oracle::plain_quad([cs, s](double t) { return cs * std::pow(t, -2 * s); }, 0.1, 1.0);
  CHECK(std::abs(mu_moment(s, 1, 0.1, 1.0) - ref) <= 1e-10 * ref);
  CHECK_THROWS_AS(mu_moment(s, 2, 0.1, kInf), DivergenceError);
  CHECK_THROWS_AS(mu_moment(s, 1, 0.0, 1.0), DivergenceError);
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre(16);
  double sw = 0, s30 = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    sw += g.w[i];
    s30 += g.w[i] * std::pow(g.x[i], 30);
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
}

TEST_CASE("quad_mu_line basic cases") {
  const double s = 0.75;
  const auto one = [](double) { return 1.0; };
  for (double eps : {1e-3, 0.05, 0.5, 3.0, 100.0}) {
    const QuadResult r = quad_mu_line(one, s, eps);
    CHECK(std::abs(r.value - mu_mass(s, eps)) <= 1e-12 * mu_mass(s, eps));
  }
  const double eta = 0.37;
  const auto sq = [eta](double t) { return t < eta ? t * t : 0.0; };
  QuadSpec q;
  q.inner_cut = eta;
  const QuadResult r = quad_mu_line(sq, s, 0.0, q);
  CHECK(std::abs(r.value - mu_moment(s, 2, 0.0, eta)) <= 1e-9 * mu_moment(s, 2, 0.0, eta));
}

TEST_CASE("Fourier symbol of the one-dimensional second difference") {
  for (double s : {0.55, 0.75, 0.9})
    for (double w : {0.5, 1.0, 2.0})
      for (double c : {0.0, 0.3, 1.1}) {
        const auto f = [w, c](double t) { return std::cos(c + w * t) + std::cos(c - w * t) - 2 * std::cos(c); };
        const QuadResult r = quad_mu_line(f, s, 0.0);
        const double ex = -std::pow(w, 2 * s) * std::cos(c);
        CHECK(std::abs(r.value - ex) <= 1e-7 * std::abs(ex));
        CHECK(std::abs(r.value - ex) <= 10 * r.error + 1e-12);
      }
}

TEST_CASE("truncated cosine line integral against an oscillatory oracle") {
  for (double s : {0.6, 0.85})
    for (double eps : {0.01, 0.2, 1.5}) {
      const double c = 0.4, w = 1.3;
      const QuadResult r = quad_mu_line([&](double t) { return std::cos(c + w * t); }, s, eps);
      const double ref = frac_constant_1d(s) * oracle::cos_line_integral(c, w, s, eps);
      CHECK(std::abs(r.value - ref) <= 1e-9 * mu_mass(s, eps));
    }
}

TEST_CASE("scaling and linearity") {
  const double s = 0.65, lam = 2.5, eps = 0.2;
  const auto f = [](double t) { return std::exp(-t) * std::cos(3 * t); };
  const auto fl = [&](double t) { return f(lam * t); };
  const QuadResult a = quad_mu_line(fl, s, eps), b = quad_mu_line(f, s, lam * eps);
  CHECK(std::abs(a.value - std::pow(lam, 2 * s) * b.value) <= 1e-9 * std::abs(a.value) + 10 * (a.error + b.error));

  const auto g = [](double t) { return 1.0 / (1.0 + t * t); };
  const QuadResult rf = quad_mu_line(f, s, eps), rg = quad_mu_line(g, s, eps);
  const QuadResult rs = quad_mu_line([&](double t) { return 2.0 * f(t) - 3.0 * g(t); }, s, eps);
  CHECK(std::abs(rs.value - (2 * rf.value - 3 * rg.value)) <= 1e-9 * (std::abs(rf.value) + std::abs(rg.value)) * 5);
}

TEST_CASE("finite part of a linearly vanishing integrand") {
  const double s = 0.75, cs = frac_constant_1d(s);
  // sin t: rate 1, finite part C_s (Gamma(mu) sin(pi mu/2) - 1/(mu+1)) with mu = -2s.
  const double mu = -2 * s;
  const double ref = cs * (std::tgamma(mu) * std::sin(kPi * mu / 2) - 1.0 / (mu + 1.0));
  const FinitePart fp = quad_mu_line_finite_part([](double t) { return std::sin(t); }, s);
  CHECK(fp.rate == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(fp.finite - ref) <= 1e-9 * std::abs(ref));
}

TEST_CASE("bad quadrature specs") {
  QuadSpec q;
  q.nodes_per_panel = 3;
  CHECK_THROWS_AS(q.validate(), DomainError);
  q = QuadSpec{};
  q.rel_tol = 0;
  CHECK_THROWS_AS(quad_mu_line([](double) { return 1.0; }, 0.7, 1.0, q), DomainError);
}

TEST_CASE("budget exhaustion raises a convergence error") {
  QuadSpec q;
  q.max_evaluations = 2000;
  CHECK_THROWS_AS(quad_mu_line([](double t) { return std::cos(t); }, 0.7, 0.01, q), ConvergenceError);
}
