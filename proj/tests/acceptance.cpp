// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fraclap/harness.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Stable for tiny angles, unlike acos of the cosine.
double angle_between(const Vec& a, const Vec& b) {
  const Vec u = (1.0 / norm(a)) * a, v = (1.0 / norm(b)) * b;
  return 2 * std::atan2(norm(u - v), norm(u + v));
}

double small_c(double s) { return frac_constant_1d(s) / (s * (1 - s)); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(std::abs(y[i]));
  mx /= x.size(), my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// 1. Gamma formula against the cosine integral, the c_s interval, and C(1,s) = C_s.
Outcome constants() {
  Outcome o;
  double worst = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double s = 0.5 + 0.005 * i;
    const double cg = frac_constant_1d(s);
    const double ci = oracle::frac_constant_by_cosine(s);
    worst = std::max(worst, std::abs(cg - ci) / cg);
    const double c = small_c(s);
    o.require(c > std::pow(12.0 / 13.0, 2) && c < std::pow(12.0 / 5.0, 2), "c_s outside interval at s=" + num(s));
    o.require(frac_constant_nd(1, s) == cg, "C(1,s) != C_s at s=" + num(s));
  }
  o.require(worst <= 1e-8, "C_s mismatch " + num(worst));
  o.note("max rel diff " + num(worst) + " over 99 s");
  return o;
}

// 2. int_0^inf of the cosine second difference against -w^{2s} cos(c).
Outcome fourier_symbol() {
  Outcome o;
  double worst = 0.0;
  for (double s : {0.55, 0.75, 0.9})
    for (double w : {0.5, 1.0, 2.0})
      for (double c : {0.0, 0.3, 1.1}) {
        const auto f = [w, c](double t) { return std::cos(c + w * t) + std::cos(c - w * t) - 2 * std::cos(c); };
        const double ex = -std::pow(w, 2 * s) * std::cos(c);
        worst = std::max(worst, std::abs(quad_mu_line(f, s, 0.0).value - ex) / std::abs(ex));
      }
  o.require(worst <= 1e-7, "rel error " + num(worst));
  o.note("max rel error " + num(worst) + " over 27 cases");
  return o;
}

// 3. The nested sup-inf picks the gradient direction and reproduces the aligned integral.
Outcome extremizer() {
  Outcome o;
  double worst_angle = 0.0, worst_rel = 0.0;
  for (const char* e : {"cosine", "gaussian:x=0.5,0.3", "gaussian:b=1,0.3;x=0.5,0.4"})
    for (double s : {0.6, 0.8}) {
      const auto phi = make_entry(e);
      const auto aligned = lap_frac(phi, phi.point, s);
      const auto nested = lap_frac_nested(phi, phi.point, s);
      const Vec p = phi.gradient(phi.point);
      worst_angle = std::max(worst_angle, angle_between(nested.sup_direction, p));
      worst_rel = std::max(worst_rel, std::abs(nested.value - aligned.value) / std::abs(aligned.value));
    }
  o.require(worst_angle <= 1e-4, "angle " + num(worst_angle));
  o.require(worst_rel <= 1e-6, "value " + num(worst_rel));
  o.note("max angle " + num(worst_angle) + " rad, max rel diff " + num(worst_rel));
  return o;
}

Outcome order_sweep(const std::string& entry, AverageKind avg, const std::vector<double>& s_values, double tol) {
  Outcome o;
  SweepConfig cfg;
  cfg.entry = entry;
  cfg.average = avg;
  cfg.s_values = s_values;
  cfg.order_tolerance = tol;
  const auto rep = run_sweep(cfg);
  o.require(!rep.numerical_failure, entry + " row failure");
  for (const auto& r : rep.rows)
    if (!r.pass) o.require(false, entry + " bound margin " + num(r.margin) + " at eps=" + num(r.eps));
  for (const auto& s : rep.series) {
    const std::string got = s.fit.infinite ? "inf" : num(s.fit.order);
    o.require(s.order_pass, entry + " s=" + num(s.s) + " order " + got + " < " + num(*s.expected_order - tol));
    o.note(entry + " s=" + num(s.s) + ": " + got + " (need " + num(*s.expected_order - tol) + ")");
  }
  return o;
}

// 4. MVP1 residual order on the Lipschitz tent.
Outcome expansion_o() { return order_sweep("tent", AverageKind::mvp1, {0.6, 0.75, 0.9}, 0.15); }

// 5. MVP2 residual order on C^{2,1} entries and the s -> 1 limit expression.
Outcome expansion_mixed() {
  Outcome o;
  for (const char* e : {"cosine", "gaussian:b=1,0.3;x=0.5,0.4"}) {
    const auto r = order_sweep(e, AverageKind::mvp2, {0.6, 0.75, 0.9}, 0.15);
    o.require(r.pass, r.detail);
    if (r.pass) o.note(r.detail);
    const auto phi = make_entry(e);
    for (double eps : {0.02, 0.005}) {
      const auto probe = s_uniformity_probe(phi, phi.point, eps, {0.99});
      const auto& row = probe.rows.front();
      o.require(row.mixed_within_limit, std::string(e) + " s=0.99 residual " + num(row.residual_mixed) + " > 1.1*" +
                                            num(row.limit_expression));
    }
  }
  return o;
}

// 6. Full catalog against every applicable bound.
Outcome bound_domination() {
  Outcome o;
  const auto rep = audit_bounds(AuditConfig{});
  o.require(rep.violations == 0, std::to_string(rep.violations) + " violations");
  o.require(rep.failures == 0, std::to_string(rep.failures) + " evaluation failures");
  for (const auto& r : rep.rows)
    if (!r.note.empty() && r.note.rfind("skipped", 0) == 0 && r.note != "skipped: zero gradient")
      o.require(false, "unexpected skip: " + r.entry + " " + r.bound + " " + r.note);
  o.note(std::to_string(rep.rows.size()) + " rows, " + std::to_string(rep.skipped) +
         " skipped (mixed bound at zero gradient)");
  return o;
}

// 7. Prism measure, prism vs line averages, and the MVP3 schedule.
Outcome prism_suite() {
  Outcome o;
  struct Case {
    double eps, R, alpha, s;
    Vec axis;
  };
  const std::vector<Case> cases{{0.2, 1.0, 0.3, 0.7, Vec{0.6, 0.8}},
                                {0.1, 0.8, 0.6, 0.9, Vec{-1.0, 0.0}},
                                {0.25, 1.0, 0.4, 0.6, Vec{0.0, 0.6, 0.8}},
                                {0.3, 0.9, 0.8, 0.8, Vec{1.0 / 3, -2.0 / 3, 2.0 / 3}}};
  double worst_sigma = 0.0;
  std::uint64_t seed = 2024;
  for (const auto& c : cases) {
    const PrismSpec ps{c.eps, c.R, c.alpha, c.axis};
    const int N = c.axis.n;
    const double exact = prism_measure(ps, c.s, N);
    // Monte Carlo over the box [-R, R]^N with the kernel written from tgamma.
    const double cns =
        std::pow(4.0, c.s) * c.s * std::tgamma(0.5 * N + c.s) / (std::pow(kPi, 0.5 * N) * std::tgamma(1 - c.s));
    const double vol = std::pow(2 * c.R, N);
    std::mt19937_64 rng(seed++);
    std::uniform_real_distribution<double> u(-c.R, c.R);
    const int samples = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < samples; ++i) {
      Vec z(N);
      for (int k = 0; k < N; ++k) z[k] = u(rng);
      const double r = norm(z);
      double v = 0.0;
      if (r > c.eps && r < c.R && dot(c.axis, z) > 0) {
        const double ang = std::acos(std::clamp(dot(c.axis, z) / r, -1.0, 1.0));
        if (std::sin(0.5 * ang) < c.alpha) v = vol * cns * std::pow(r, -N - 2 * c.s);
      }
      sum += v;
      sq += v * v;
    }
    const double mean = sum / samples, se = std::sqrt((sq / samples - mean * mean) / samples);
    worst_sigma = std::max(worst_sigma, std::abs(mean - exact) / se);
  }
  o.require(worst_sigma <= 3.0, "Monte Carlo off by " + num(worst_sigma) + " sigma");
  o.note("measure within " + num(worst_sigma) + " sigma");

  const double s = 0.75, eps = 0.02;
  double worst_ratio = 0.0;
  for (const char* e : {"cosine", "gaussian", "gaussian:b=1,0.3;x=0.5,0.4", "bump", "quadratic"}) {
    const auto phi = make_entry(e);
    const Vec& x = phi.point;
    const auto in = bound_inputs(phi, x, s, eps, false);
    const double R = std::max(in.eta, 1.0) + 0.5;
    for (double alpha : {0.05, 0.2, 0.45}) {
      const double bound = lemma51_bound(in, R, alpha);
      for (int i = 0; i < 12; ++i) {
        const Vec y{std::cos(2 * kPi * i / 12 + 0.1), std::sin(2 * kPi * i / 12 + 0.1)};
        const double d = std::abs(prism_average(phi, x, {eps, R, alpha, y}, s) - line_average(phi, x, y, s, eps));
        worst_ratio = std::max(worst_ratio, d / bound);
      }
    }
  }
  o.require(worst_ratio <= 1.0, "prism-line gap at " + num(worst_ratio) + " of the bound");
  o.note("prism-line gap at most " + num(worst_ratio) + " of the bound");

  for (const char* e : {"cosine", "gaussian:b=1,0.3;x=0.5,0.4", "tent"}) {
    const auto r = order_sweep(e, AverageKind::mvp3, {0.6, 0.75, 0.9}, 0.2);
    o.require(r.pass, r.detail);
  }
  o.note("MVP3 schedule orders pass on cosine, anisotropic gaussian, tent");
  return o;
}

// 8. Discrete operator: mesh convergence and the stencil against a naive scan.
Outcome discrete() {
  Outcome o;
  const double eps = 0.25, R = 0.5, alpha = 0.75, s = 0.75;
  const int n = 4;
  const auto c = make_entry("constant:c=2");
  const auto pw = make_entry("cosine:xi=1,0;x=0.5,0");
  const double ref = average_prism_o(pw, pw.point, eps, R, alpha, s);
  std::vector<double> hs, ec, ep;
  for (int k = 0; k < 6; ++k) {
    const double h = eps / (16.5 * std::pow(2.0, k));
    hs.push_back(h);
    ec.push_back(average_discrete(c, c.point, eps, R, alpha, s, {h, n}) - 2.0);
    ep.push_back(average_discrete(pw, pw.point, eps, R, alpha, s, {h, n}) - ref);
  }
  for (const auto& [name, err] : {std::pair{"constant", ec}, std::pair{"cosine", ep}}) {
    const double ratio = std::pow(2.0, slope(hs, err));
    o.require(ratio >= 1.5 && ratio <= 2.5, std::string(name) + " halving ratio " + num(ratio));
    o.note(std::string(name) + " halving ratio " + num(ratio) + ", final error " + num(std::abs(err.back())));
  }

  const auto phi = make_entry("gaussian:b=1,0.3;x=0.5,0.4");
  const double e2 = 0.2, R2 = 0.9, a2 = 0.35, s2 = 0.7, h = e2 / 4;
  const int n2 = 6;
  const double got = average_discrete(phi, phi.point, e2, R2, a2, s2, {h, n2});
  struct P {
    long mm, i, j;
  };
  double best = -kInf, worst = kInf;
  const long M = static_cast<long>(std::ceil(R2 / h)) + 2;
  for (const auto& th : grid_directions(2, n2)) {
    std::vector<P> pts;
    for (long i = -M; i <= M; ++i)
      for (long j = -M; j <= M; ++j)
        if (prism_contains({e2, R2, a2, th}, Vec{h * i, h * j})) pts.push_back({i * i + j * j, i, j});
    std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
      return a.mm != b.mm ? a.mm < b.mm : (a.i != b.i ? a.i < b.i : a.j < b.j);
    });
    double sum = 0.0;
    for (const auto& p : pts)
      sum += phi(phi.point + Vec{h * p.i, h * p.j}) * std::pow(h * h * static_cast<double>(p.mm), -0.5 * (2 + 2 * s2));
    best = std::max(best, sum);
    worst = std::min(worst, sum);
  }
  const double naive =
      s2 * std::pow(h, 2) / (cap_area(a2, 2) * (std::pow(e2, -2 * s2) - std::pow(R2, -2 * s2))) * (best + worst);
  o.require(got == naive, "stencil sum differs from naive scan");
  o.note("stencil bit-identical at h = eps/4");
  return o;
}

// 9. Ball mean and local midpoint.
Outcome classical() {
  Outcome o;
  double worst_ball = 0.0, worst_mid = 0.0;
  for (const char* e : {"gaussian:b=1,0.3;x=0.5,0.4", "cosine", "quadratic", "gaussian:dim=3;x=0.2,0.1,0.3"}) {
    const auto phi = make_entry(e);
    const Vec& x = phi.point;
    const int N = x.n;
    const double target = trace(phi.hessian(x)) / (2.0 * (N + 2));
    for (double eps : {0.01, 0.005}) {
      const double d = (ball_mean_local(phi, x, eps) - phi(x)) / (eps * eps);
      worst_ball = std::max(worst_ball, std::abs(d - target) / std::abs(target));
      if (norm(phi.gradient(x)) > 0) {
        const double mid = midpoint_local(phi, x, eps) - phi(x) - 0.5 * eps * eps * lap_inf_local(phi, x);
        const double bound = 0.5 * midpoint_local_bound(bound_inputs(phi, x, 0.75, eps, true));
        worst_mid = std::max(worst_mid, std::abs(mid) / bound);
      }
    }
  }
  o.require(worst_ball <= 0.01, "ball mean rel error " + num(worst_ball));
  o.require(worst_mid <= 1.0, "midpoint at " + num(worst_mid) + " of its bound");
  o.note("ball mean rel error " + num(worst_ball) + ", midpoint at most " + num(worst_mid) + " of its bound");
  return o;
}

// 10. Identities between averages and operators.
Outcome identities() {
  Outcome o;
  double worst_link = 0.0;
  for (const char* e : {"cosine", "gaussian:b=1,0.3;x=0.5,0.4", "tent", "holder"})
    for (double s : {0.6, 0.9})
      for (double eps : {0.1, 0.01}) {
        const auto phi = make_entry(e);
        const auto parts = eps_parts(phi, phi.point, s, eps);
        const auto mid = midpoint_parts(phi, phi.point, eps);
        const MixedParts m{s, parts.average_o(), mid.value()};
        o.require(m.value() == (1 - s) * parts.average_o() + s * mid.value(), "mixed average not exact");
        const double lhs = parts.average_o() - parts.phi_x;
        const double rhs = std::pow(eps, 2 * s) / (small_c(s) * (1 - s)) * parts.lap_frac_eps();
        worst_link = std::max(worst_link, std::abs(lhs - rhs));
      }
  o.require(worst_link <= 1e-12, "average/operator link " + num(worst_link));

  for (int N : {1, 2, 3}) {
    const auto c = make_entry("constant:c=3;dim=" + std::to_string(N));
    Vec x(N);
    o.require(std::abs(lap_frac(c, x, 0.7).value) <= 1e-10, "constant not annihilated");
    o.require(std::abs(lap_frac_eps(c, x, 0.7, 0.05).value) <= 1e-10, "constant not annihilated (eps)");
    o.require(std::abs(average_o(c, x, 0.7, 0.05) - 3.0) <= 1e-12, "constant average");
  }
  const auto g = make_entry("gaussian:x=0.5,0.3");
  const double s = 0.7, lam = 1.8;
  const double a = lap_frac(rescaled(g, lam), (1.0 / lam) * g.point, s).value;
  const double b = std::pow(lam, 2 * s) * lap_frac(g, g.point, s).value;
  o.require(std::abs(a - b) <= 1e-9 * std::abs(b), "scaling covariance " + num(std::abs(a - b) / std::abs(b)));
  o.note("max link error " + num(worst_link));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 constants", 5, constants},
      {"2 fourier symbol", 10, fourier_symbol},
      {"3 gradient extremizer", 60, extremizer},
      {"4 MVP1 residual order", 300, expansion_o},
      {"5 MVP2 residual order", 300, expansion_mixed},
      {"6 bound domination", 600, bound_domination},
      {"7 prism suite", 600, prism_suite},
      {"8 discrete operator", 300, discrete},
      {"9 classical limits", 60, classical},
      {"10 identities", 60, identities},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) o.require(false, "runtime " + num(dt) + " s over " + num(c.budget_s) + " s");
    if (!o.pass) ++failed;
    std::printf("%s  %-24s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
