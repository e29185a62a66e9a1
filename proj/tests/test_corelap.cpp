#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fraclap/corelap.hpp"
#include "fraclap/errors.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_between(const Vec& a, const Vec& b) {
  return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0));
}

}  // namespace

TEST_CASE("second difference") {
  const auto c = make_entry("constant:c=4");
  CHECK(second_difference(c, Vec{0.1, 0.2}, Vec{0.3, 0.0}, Vec{-1.0, 2.0}) == 0.0);
  const auto lin = make_entry("quadratic:p=1,-2;h=0");
  const Vec y{0.1, 0.05};
  CHECK(std::abs(second_difference(lin, Vec{0.2, 0.1}, y, y)) <= 1e-16);
  const auto pw = make_entry("cosine:xi=1,0;x=0,0");
  for (double t : {0.1, 0.7, 2.0}) {
    const Vec ty{t, 0.0};
    CHECK(second_difference(pw, Vec{0.0, 0.0}, ty, ty) == doctest::Approx(2 * std::cos(t) - 2).epsilon(1e-14));
  }
}

TEST_CASE("line average") {
  const auto c = make_entry("constant:c=-2.5");
  CHECK(line_average(c, Vec{0.0, 0.0}, Vec{0.0, 1.0}, 0.7, 0.05) == doctest::Approx(-2.5).epsilon(1e-12));
  const auto pw = make_entry("cosine:xi=1,0;x=0,0");
  for (double s : {0.6, 0.9})
    for (double eps : {0.01, 0.5}) {
      const double ref = frac_constant_1d(s) * oracle::cos_line_integral(0.0, 1.0, s, eps) / mu_mass(s, eps);
      CHECK(line_average(pw, Vec{0.0, 0.0}, Vec{1.0, 0.0}, s, eps) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("plane wave operator matches its symbol in every dimension") {
  for (const char* e : {"cosine:xi=2;x=0.4", "cosine:xi=0.8,0.6;x=0.9,0.5", "cosine:xi=0.3,-0.4,1.2;x=0.2,0.1,0.5"}) {
    const auto phi = make_entry(e);
    for (double s : {0.55, 0.75, 0.95}) {
      CAPTURE(e);
      CAPTURE(s);
      const auto v = lap_frac(phi, phi.point, s);
      const double ex = *phi.exact_lap_frac(phi.point, s);
      CHECK(v.branch == Branch::gradient_aligned);
      CHECK(std::abs(v.value - ex) <= 1e-6 * std::abs(ex));
      CHECK(delta_inf_s(v.value, s) == doctest::Approx(v.value / frac_constant_1d(s)));
    }
  }
}

TEST_CASE("constants are annihilated") {
  for (int N : {1, 2, 3}) {
    const auto c = make_entry("constant:c=3;dim=" + std::to_string(N));
    Vec x(N);
    for (double eps : {0.01, 0.3}) {
      CHECK(std::abs(lap_frac_eps(c, x, 0.7, eps).value) <= 1e-10);
      CHECK(average_o(c, x, 0.7, eps) == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(midpoint_local(c, x, eps) == 3.0);
      CHECK(average_mixed(c, x, 0.7, eps) == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(ball_mean_local(c, x, eps) == doctest::Approx(3.0).epsilon(1e-12));
    }
    CHECK(std::abs(lap_frac(c, x, 0.7).value) <= 1e-10);
  }
}

TEST_CASE("eps-operator obeys the local bound on every catalog entry") {
  for (const auto& phi : catalog()) {
    const Vec x = phi.point;
    const double eta = phi.eta(x), cx = phi.c_bound(x);
    for (double s : {0.6, 0.9}) {
      FracParams fp(s);
      const double bound = 2 * fp.small_c() * (1 - s) * phi.sup_norm * std::pow(eta, -2 * s) +
                           fp.small_c() * s * cx * std::pow(eta, 2 - 2 * s);
      for (double eps : {0.5 * eta, 0.05 * eta}) {
        CAPTURE(phi.name);
        CHECK(std::abs(lap_frac_eps(phi, x, s, eps).value) <= bound);
      }
    }
  }
}

TEST_CASE("first average and eps-operator are linked exactly") {
  for (const char* e : {"gaussian:x=0.5,0.3", "tent", "cosine:xi=0.8,0.6;x=0.9,0.5"}) {
    const auto phi = make_entry(e);
    for (double s : {0.6, 0.85})
      for (double eps : {0.001, 0.1}) {
        const auto parts = eps_parts(phi, phi.point, s, eps);
        FracParams fp(s);
        const double lhs = parts.average_o() - parts.phi_x;
        const double rhs = std::pow(eps, 2 * s) / (fp.small_c() * (1 - s)) * parts.lap_frac_eps();
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        // The unshifted form of the operator agrees with the shifted one.
        const double direct = parts.sup_integral() + parts.inf_integral() -
                              (1 - s) * fp.small_c() * std::pow(eps, -2 * s) * parts.phi_x;
        CHECK(std::abs(direct - parts.lap_frac_eps()) <= 1e-9 * (1 + parts.mass));
      }
  }
}

TEST_CASE("scaling, translation and sign") {
  const auto g = make_entry("gaussian:x=0.5,0.3");
  const double s = 0.7, lam = 1.8;
  const auto gl = rescaled(g, lam);
  const Vec x = g.point;
  const Vec xl = (1.0 / lam) * x;
  CHECK(lap_frac(gl, xl, s).value == doctest::Approx(std::pow(lam, 2 * s) * lap_frac(g, x, s).value).epsilon(1e-9));
  const double eps = 0.05;
  CHECK(lap_frac_eps(gl, xl, s, eps / lam).value ==
        doctest::Approx(std::pow(lam, 2 * s) * lap_frac_eps(g, x, s, eps).value).epsilon(1e-8));
  const Vec shift{0.2, -0.7};
  const auto gt = translated(g, shift);
  CHECK(lap_frac(gt, x - shift, s).value == doctest::Approx(lap_frac(g, x, s).value).epsilon(1e-12));
  CHECK(lap_frac(negated(g), x, s).value == doctest::Approx(-lap_frac(g, x, s).value).epsilon(1e-12));
}

TEST_CASE("critical point: separated sup-inf against a direction grid") {
  const auto g = make_entry("gaussian:b=1,0.3;x=0,0");
  const double s = 0.75;
  const auto v = lap_frac(g, g.point, s);
  CHECK(v.branch == Branch::sup_inf);
  double mx = -1e300, mn = 1e300;
  for (int j = 0; j < 360; ++j) {
    const Vec y{std::cos(2 * kPi * j / 360), std::sin(2 * kPi * j / 360)};
    const double f = quad_mu_line([&](double t) { return g(t * y) - 1.0; }, s, 0.0).value;
    mx = std::max(mx, f);
    mn = std::min(mn, f);
  }
  CHECK(v.value == doctest::Approx(mx + mn).epsilon(1e-6));
  // Radial entry: value does not depend on the direction picked.
  const auto r = make_entry("gaussian");
  const auto vr = lap_frac(r, r.point, s);
  const double along = quad_mu_line([&](double t) { return r(Vec{t, 0.0}) - 1.0; }, s, 0.0).value;
  CHECK(vr.value == doctest::Approx(2 * along).epsilon(1e-9));
  FracParams fp(s);
  const double eta = r.eta(r.point);
  CHECK(std::abs(vr.value) <=
        2 * fp.small_c() * (1 - s) * std::pow(eta, -2 * s) + fp.small_c() * s * r.c_bound(r.point) * std::pow(eta, 2 - 2 * s));
}

TEST_CASE("eps-operator converges at a critical point within the local bound") {
  const auto g = make_entry("gaussian");
  for (double s : {0.6, 0.9}) {
    const double full = lap_frac(g, g.point, s).value;
    FracParams fp(s);
    for (double eps : {0.2, 0.02, 0.002}) {
      const double d = std::abs(lap_frac_eps(g, g.point, s, eps).value - full);
      CHECK(d <= fp.small_c() * s * g.c_bound(g.point) * std::pow(eps, 2 - 2 * s));
    }
  }
}

TEST_CASE("nested sup-inf agrees with the gradient-aligned integral") {
  const auto g = make_entry("gaussian:x=0.5,0.3");
  const double s = 0.8;
  const auto aligned = lap_frac(g, g.point, s);
  const auto nested = lap_frac_nested(g, g.point, s);
  CHECK(std::abs(nested.value - aligned.value) <= 1e-6 * std::abs(aligned.value));
  CHECK(angle_between(nested.sup_direction, g.gradient(g.point)) <= 1e-4);
  CHECK(angle_between(nested.inf_direction, g.gradient(g.point)) <= 1e-4);
}

TEST_CASE("nested sup-inf at a critical point") {
  const auto g = make_entry("gaussian:b=1,0.3;x=0,0");
  CoreSpec spec;
  spec.nested_opt.seeds_2d = 32;
  spec.infsup_diagnostic = true;
  const auto nested = lap_frac_nested(g, g.point, 0.75, spec);
  const auto sep = lap_frac(g, g.point, 0.75);
  CHECK(nested.value == doctest::Approx(sep.value).epsilon(1e-8));
  REQUIRE(nested.infsup);
  CHECK(*nested.infsup == doctest::Approx(nested.value).epsilon(1e-8));
}

TEST_CASE("local midpoint") {
  const auto g = make_entry("gaussian:x=0.5,0.3");
  const Vec x = g.point;
  const Vec p = g.gradient(x);
  const Mat h = g.hessian(x);
  const double dinf = lap_inf_local(g, x);
  for (double eps : {0.1, 0.03, 0.01}) {
    const double dev = midpoint_local(g, x, eps) - g(x);
    const double bound = 0.5 * (4 * std::pow(eps, 3) * std::pow(spectral_norm(h), 2) / norm(p) +
                                eps * eps * hessian_oscillation(g, x, eps));
    CHECK(std::abs(dev - 0.5 * eps * eps * dinf) <= bound);
  }
  const auto c = make_entry("gaussian");
  const auto parts = midpoint_parts(c, c.point, 0.2);
  CHECK(parts.sup == 1.0);
  CHECK(parts.value() <= 1.0);
}

TEST_CASE("mixed average") {
  const auto g = make_entry("bump");
  const double s = 0.7, eps = 0.05;
  const auto m = mixed_parts(g, g.point, s, eps);
  CHECK(m.value() == (1 - s) * m.average_o + s * m.midpoint);
  const auto m99 = mixed_parts(g, g.point, 0.99, eps);
  CHECK(std::abs(m99.value() - m99.midpoint) <= 0.02 * std::abs(m99.midpoint));
}

TEST_CASE("local infinity-Laplacian") {
  const auto pw = make_entry("cosine:xi=1,0;x=1.5707963267948966,0");
  CHECK(std::abs(lap_inf_local(pw, pw.point)) <= 1e-15);
  const auto q = make_entry("quadratic:p=1,0;h=1");
  CHECK(lap_inf_local(q, Vec{0.0, 0.0}) == doctest::Approx(1.0));
  const auto g = make_entry("gaussian:x=0.5,0.3");
  const double r2 = 0.34;
  CHECK(lap_inf_local(g, g.point) == doctest::Approx((4 * r2 - 2) * std::exp(-r2)).epsilon(1e-13));
  CHECK_THROWS_AS(lap_inf_local(make_entry("gaussian"), Vec{0.0, 0.0}), PreconditionError);
}

TEST_CASE("ball mean") {
  for (int N : {1, 2, 3}) {
    const auto q = make_entry(N == 1 ? "quadratic:p=0.5;h=2" : (N == 2 ? "quadratic:p=0.5,1;h=2" : "quadratic:p=0.5,1,0;h=2"));
    Vec x(N);
    x[0] = 0.1;
    const double lap = 2.0 * N;
    for (double eps : {0.1, 0.01}) {
      const double dev = ball_mean_local(q, x, eps) - q(x);
      CHECK(dev / (eps * eps) == doctest::Approx(lap / (2 * (N + 2))).epsilon(1e-10));
    }
  }
  // An odd perturbation about x does not move the mean.
  TestFunction odd = make_entry("gaussian");
  odd.eval = [](const Vec& z) { return std::exp(-dot(z, z)) + std::pow(z[0] - 0.2, 3) + (z[1] + 0.1); };
  TestFunction even = make_entry("gaussian");
  CHECK(ball_mean_local(odd, Vec{0.2, -0.1}, 0.1) - 0.0 == doctest::Approx(ball_mean_local(even, Vec{0.2, -0.1}, 0.1)).epsilon(1e-13));
}

TEST_CASE("preconditions") {
  auto g = make_entry("gaussian");
  g.gradient = nullptr;
  CHECK_THROWS_AS(lap_frac(g, Vec{0.0, 0.0}, 0.7), PreconditionError);
  CHECK_THROWS_AS(lap_frac_eps(g, Vec{0.0, 0.0}, 0.7, 0.0), DomainError);
  CHECK_THROWS_AS(lap_frac_eps(g, Vec{0.0, 0.0}, 0.4, 0.1), DomainError);
  CHECK_THROWS_AS(lap_frac_eps(g, Vec{0.0, 0.0, 0.0}, 0.7, 0.1), DomainError);
}
