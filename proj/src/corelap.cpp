#include "fraclap/corelap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

// Keep the origin fit inside the ball where phi is C^2.
QuadSpec quad_near(const TestFunction& phi, const Vec& x, const QuadSpec& q) {
  QuadSpec out = q;
  if (phi.eta) out.inner_cut = std::min(q.inner_cut, phi.eta(x));
  return out;
}

void check_point(const TestFunction& phi, const Vec& x) {
  if (x.n != phi.dim) throw DomainError("point dimension does not match the test function");
  if (x.n < 1 || x.n > kMaxDim) throw UnsupportedDimension("points must lie in R^1, R^2 or R^3");
}

void check_eps(double eps) {
  if (!(eps > 0) || std::isinf(eps)) throw DomainError("eps must be positive and finite");
}

Vec gradient_at(const TestFunction& phi, const Vec& x) {
  if (!phi.has_gradient()) throw PreconditionError("entry '" + phi.name + "' has no gradient");
  return phi.gradient(x);
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::gradient_aligned ? "gradient_aligned" : "sup_inf"; }

double second_difference(const TestFunction& phi, const Vec& x, const Vec& y, const Vec& yt) {
  return phi(x + y) + phi(x - yt) - 2.0 * phi(x);
}

QuadResult line_integral(const TestFunction& phi, const Vec& x, const Vec& y, double s, double eps,
                         const QuadSpec& quad) {
  check_point(phi, x);
  check_eps(eps);
  return quad_mu_line([&](double t) { return phi(x + t * y); }, s, eps, quad);
}

double line_average(const TestFunction& phi, const Vec& x, const Vec& y, double s, double eps, const QuadSpec& quad) {
  return line_integral(phi, x, y, s, eps, quad).value / mu_mass(s, eps);
}

EpsParts eps_parts(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec) {
  check_order(s);
  check_point(phi, x);
  check_eps(eps);
  EpsParts out;
  out.s = s;
  out.eps = eps;
  out.phi_x = phi(x);
  out.mass = mu_mass(s, eps);
  const QuadSpec q = quad_near(phi, x, spec.quad);

  // Integrate phi(x+ty) - phi(x), and on (eps, cut) also take out the linear
  // Taylor term, added back in closed form. Both shifts are the same for every
  // direction pair, so the extremizers are unchanged and the large
  // eps^{-2s} and eps^{1-2s} pieces cancel analytically.
  const bool linear = phi.has_gradient() && q.inner_cut > eps;
  const Vec p = phi.has_gradient() ? phi.gradient(x) : Vec(x.n);
  const double cut = q.inner_cut;
  const double m1 = linear ? mu_moment(s, 1, eps, cut) : 0.0;
  const double px = out.phi_x;
  auto shifted = [&](const Vec& y) {
    if (linear) {
      const double py = dot(p, y);
      const auto a = quad_mu_interval([&](double t) { return phi(x + t * y) - px - t * py; }, s, eps, cut, q);
      const auto b = quad_mu_line([&](double t) { return phi(x + t * y) - px; }, s, cut, q);
      out.quad_error = std::max(out.quad_error, a.error + b.error);
      out.evaluations += a.evaluations + b.evaluations;
      return a.value + b.value + py * m1;
    }
    const auto r = quad_mu_line([&](double t) { return phi(x + t * y) - px; }, s, eps, q);
    out.quad_error = std::max(out.quad_error, r.error);
    out.evaluations += r.evaluations;
    return r.value;
  };
  const auto [mx, mn] = sphere_extrema(shifted, x.n, spec.opt);
  out.sup_shift = mx.value;
  out.inf_shift = mn.value;
  out.sup_direction = mx.argopt;
  out.inf_direction = mn.argopt;
  out.opt_tol = std::max(mx.achieved_tol, mn.achieved_tol);
  return out;
}

OperatorValue lap_frac_eps(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec) {
  const EpsParts e = eps_parts(phi, x, s, eps, spec);
  OperatorValue v;
  v.value = e.lap_frac_eps();
  v.branch = Branch::sup_inf;
  v.quad_error = 2.0 * e.quad_error;
  v.evaluations = e.evaluations;
  v.opt_tol = e.opt_tol;
  v.sup_direction = e.sup_direction;
  v.inf_direction = e.inf_direction;
  return v;
}

OperatorValue lap_frac(const TestFunction& phi, const Vec& x, double s, const CoreSpec& spec) {
  check_order(s);
  check_point(phi, x);
  const Vec p = gradient_at(phi, x);
  const QuadSpec q = quad_near(phi, x, spec.quad);
  const double px = phi(x);
  OperatorValue v;
  if (norm(p) > spec.gradient_zero_tol) {
    const Vec e = normalized(p);
    const auto r = quad_mu_line([&](double t) { return phi(x + t * e) + phi(x - t * e) - 2.0 * px; }, s, 0.0, q);
    v.value = r.value;
    v.branch = Branch::gradient_aligned;
    v.quad_error = r.error;
    v.evaluations = r.evaluations;
    v.sup_direction = e;
    v.inf_direction = e;
    return v;
  }
  // With p = 0 each one-sided difference is O(t^2), so both halves converge
  // and sup_y inf_z splits into max + min of one function of the direction.
  auto one_sided = [&](const Vec& y) {
    const auto r = quad_mu_line([&](double t) { return phi(x + t * y) - px; }, s, 0.0, q);
    v.quad_error = std::max(v.quad_error, r.error);
    v.evaluations += r.evaluations;
    return r.value;
  };
  const auto [mx, mn] = sphere_extrema(one_sided, x.n, spec.opt);
  v.value = mx.value + mn.value;
  v.branch = Branch::sup_inf;
  v.quad_error *= 2.0;
  v.opt_tol = std::max(mx.achieved_tol, mn.achieved_tol);
  v.sup_direction = mx.argopt;
  v.inf_direction = -mn.argopt;
  return v;
}

OperatorValue lap_frac_nested(const TestFunction& phi, const Vec& x, double s, const CoreSpec& spec) {
  check_order(s);
  check_point(phi, x);
  const Vec p = gradient_at(phi, x);
  const QuadSpec q = quad_near(phi, x, spec.quad);
  const double px = phi(x);
  const int N = x.n;
  OperatorValue v;
  v.branch = Branch::sup_inf;
  // L splits into two one-sided differences, each O(t) (O(t^2) when p = 0),
  // so the rate, the finite part and the plain integral are all additive.
  // Integrating the halves separately avoids two-frequency integrands.
  auto half = [&](const Vec& w) {
    return [&phi, &x, px, w](double t) { return phi(x + t * w) - px; };
  };
  if (norm(p) > spec.gradient_zero_tol) {
    PairFnT<DivergentValue> obj = [&](const Vec& y, const Vec& z) {
      const auto a = quad_mu_line_finite_part(half(y), s, q);
      const auto b = quad_mu_line_finite_part(half(-z), s, q);
      v.quad_error = std::max(v.quad_error, a.error + b.error);
      v.evaluations += a.evaluations + b.evaluations;
      return DivergentValue{a.rate + b.rate, a.finite + b.finite};
    };
    const auto [outer, inner] = supinf_pair_t(obj, N, spec.nested_opt);
    v.value = outer.value.finite;
    v.opt_tol = std::max(outer.achieved_tol, inner.achieved_tol);
    v.sup_direction = outer.argopt;
    v.inf_direction = inner.argopt;
    if (spec.infsup_diagnostic) v.infsup = infsup_value_t(obj, N, spec.nested_opt).finite;
    return v;
  }
  PairFnT<double> obj = [&](const Vec& y, const Vec& z) {
    const auto a = quad_mu_line(half(y), s, 0.0, q);
    const auto b = quad_mu_line(half(-z), s, 0.0, q);
    v.quad_error = std::max(v.quad_error, a.error + b.error);
    v.evaluations += a.evaluations + b.evaluations;
    return a.value + b.value;
  };
  const auto [outer, inner] = supinf_pair_t(obj, N, spec.nested_opt);
  v.value = outer.value;
  v.opt_tol = std::max(outer.achieved_tol, inner.achieved_tol);
  v.sup_direction = outer.argopt;
  v.inf_direction = inner.argopt;
  if (spec.infsup_diagnostic) v.infsup = infsup_value_t(obj, N, spec.nested_opt);
  return v;
}

double delta_inf_s(double lap_frac_value, double s) { return lap_frac_value / frac_constant_1d(s); }

double average_o(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec) {
  return eps_parts(phi, x, s, eps, spec).average_o();
}

MidpointParts midpoint_parts(const TestFunction& phi, const Vec& x, double eps, const OptSpec& opt) {
  check_point(phi, x);
  check_eps(eps);
  std::vector<Vec> warm;
  if (phi.has_gradient()) {
    const Vec p = phi.gradient(x);
    if (norm(p) > 0) warm = {p, -p};
  }
  const auto b = ball_extrema(phi.eval, x, eps, opt, warm);
  return {b.sup, b.inf};
}

double midpoint_local(const TestFunction& phi, const Vec& x, double eps, const OptSpec& opt) {
  return midpoint_parts(phi, x, eps, opt).value();
}

MixedParts mixed_parts(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec) {
  MixedParts m;
  m.s = s;
  m.average_o = average_o(phi, x, s, eps, spec);
  m.midpoint = midpoint_local(phi, x, eps, spec.opt);
  return m;
}

double average_mixed(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec) {
  return mixed_parts(phi, x, s, eps, spec).value();
}

double lap_inf_local(const TestFunction& phi, const Vec& x, double gradient_zero_tol) {
  check_point(phi, x);
  const Vec p = gradient_at(phi, x);
  if (!phi.has_hessian()) throw PreconditionError("entry '" + phi.name + "' has no Hessian");
  if (norm(p) <= gradient_zero_tol) throw PreconditionError("local infinity-Laplacian needs a nonzero gradient");
  return quad_form(phi.hessian(x), normalized(p));
}

double ball_mean_local(const TestFunction& phi, const Vec& x, double eps) {
  check_point(phi, x);
  check_eps(eps);
  const int N = x.n;
  std::vector<std::pair<Vec, double>> dirs;
  if (N == 1) {
    dirs = {{Vec{-1.0}, 1.0}, {Vec{1.0}, 1.0}};
  } else if (N == 2) {
    for (int j = 0; j < 64; ++j) dirs.push_back({Vec{std::cos(2 * kPi * j / 64), std::sin(2 * kPi * j / 64)}, 1.0});
  } else {
    const auto& gz = gauss_legendre(24);
    for (std::size_t i = 0; i < gz.x.size(); ++i) {
      const double z = gz.x[i], r = std::sqrt(1 - z * z);
      for (int j = 0; j < 48; ++j)
        dirs.push_back({Vec{r * std::cos(2 * kPi * j / 48), r * std::sin(2 * kPi * j / 48), z}, gz.w[i]});
    }
  }
  const auto& gr = gauss_legendre(24);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < gr.x.size(); ++i) {
    const double r = 0.5 * eps * (gr.x[i] + 1.0);
    const double wr = gr.w[i] * std::pow(r, N - 1);
    for (const auto& [w, ww] : dirs) {
      num += wr * ww * phi(x + r * w);
      den += wr * ww;
    }
  }
  return num / den;
}

}  // namespace fraclap
