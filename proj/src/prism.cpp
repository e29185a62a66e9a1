#include "fraclap/prism.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

// Rotation of the plane taking e1 to the axis, applied to (cos th, sin th).
Vec rotate_from_axis_2d(const Vec& axis, double th) {
  const double c = std::cos(th), s = std::sin(th);
  return Vec{axis[0] * c - axis[1] * s, axis[0] * s + axis[1] * c};
}

struct CapNode {
  Vec dir;
  double w;
};

// Quadrature on the cap around the axis. Weights sum to cap_area exactly up to rounding.
std::vector<CapNode> cap_rule(const Vec& axis, double alpha) {
  const int N = axis.n;
  std::vector<CapNode> out;
  if (N == 1) return {{axis, 1.0}};
  const double tm = cap_half_angle(alpha);
  if (N == 2) {
    const auto& g = gauss_legendre(64);
    for (std::size_t i = 0; i < g.x.size(); ++i) out.push_back({rotate_from_axis_2d(axis, tm * g.x[i]), tm * g.w[i]});
    return out;
  }
  // u = cos(theta) on [cos tm, 1] by Gauss-Legendre, azimuth by an equispaced rule.
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(axis[i]) < std::abs(axis[k])) k = i;
  Vec e(3);
  e[k] = 1.0;
  const Vec u1 = normalized(e - dot(e, axis) * axis);
  const Vec u2{axis[1] * u1[2] - axis[2] * u1[1], axis[2] * u1[0] - axis[0] * u1[2], axis[0] * u1[1] - axis[1] * u1[0]};
  const double half_gap = std::sin(0.5 * tm);
  const double span = 2.0 * half_gap * half_gap;  // 1 - cos tm
  const auto& g = gauss_legendre(8);
  const int naz = 8;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double d = 0.5 * span * (1.0 - g.x[i]);  // 1 - u
    const double u = 1.0 - d;
    const double r = std::sqrt(std::max(0.0, d * (2.0 - d)));
    for (int j = 0; j < naz; ++j) {
      const double ph = 2 * kPi * (j + 0.5) / naz;
      out.push_back({u * axis + (r * std::cos(ph)) * u1 + (r * std::sin(ph)) * u2, 0.5 * span * g.w[i] * 2 * kPi / naz});
    }
  }
  return out;
}

// int_a^b (phi(x+tw) - phi(x)) dmu_s, with the linear Taylor term on (a, cut)
// handled in closed form.
double shifted_segment(const TestFunction& phi, const Vec& x, const Vec& w, double s, double a, double b,
                       const QuadSpec& q, const Vec* p, double px) {
  const double cut = std::min(q.inner_cut, b);
  double total = 0.0;
  double lo = a;
  if (p && cut > a) {
    const double pw = dot(*p, w);
    total += quad_mu_interval([&](double t) { return phi(x + t * w) - px - t * pw; }, s, a, cut, q).value;
    total += pw * mu_moment(s, 1, a, cut);
    lo = cut;
  }
  if (b > lo) total += quad_mu_interval([&](double t) { return phi(x + t * w) - px; }, s, lo, b, q).value;
  return total;
}

double prism_average_impl(const TestFunction& phi, const Vec& x, const PrismSpec& spec, double s, const QuadSpec& q,
                          const Vec* p, double px) {
  const auto nodes = cap_rule(spec.axis, spec.alpha);
  double acc = 0.0;
  for (const auto& nd : nodes) acc += nd.w * shifted_segment(phi, x, nd.dir, s, spec.eps, spec.R, q, p, px);
  return px + acc / (cap_area(spec.alpha, x.n) * mu_mass(s, spec.eps, spec.R));
}

QuadSpec quad_near(const TestFunction& phi, const Vec& x, const QuadSpec& q) {
  QuadSpec out = q;
  if (phi.eta) out.inner_cut = std::min(q.inner_cut, phi.eta(x));
  return out;
}

}  // namespace

void PrismSpec::validate() const {
  if (!(eps > 0) || !(R > eps) || std::isinf(R)) throw DomainError("prism needs 0 < eps < R < inf");
  if (!(alpha > 0 && alpha < 1)) throw DomainError("prism alpha must lie in (0,1)");
  if (axis.n < 1 || axis.n > kMaxDim) throw UnsupportedDimension("prism axis must lie in R^1, R^2 or R^3");
  if (std::abs(norm(axis) - 1.0) > 1e-12) throw DomainError("prism axis must be a unit vector");
}

double cap_half_angle(double alpha) { return std::min(2.0 * std::asin(alpha), 0.5 * kPi); }

double cap_area(double alpha, int N) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0,1)");
  const double tm = cap_half_angle(alpha);
  switch (N) {
    case 1: return 1.0;
    case 2: return 2.0 * tm;
    case 3: {
      const double h = std::sin(0.5 * tm);
      return 4.0 * kPi * h * h;
    }
    default: throw UnsupportedDimension("cap area needs N = 1, 2 or 3");
  }
}

bool prism_contains(const PrismSpec& spec, const Vec& z) {
  const double r = norm(z);
  if (!(r > spec.eps && r < spec.R)) return false;
  if (!(dot(spec.axis, z) > 0)) return false;
  // sin(angle/2) = |y - z/|z|| / 2 for unit y, stable at small angles.
  return 0.5 * norm(spec.axis - (1.0 / r) * z) < spec.alpha;
}

double prism_measure(const PrismSpec& spec, double s, int N) {
  check_order(s);
  if (!(spec.eps > 0) || !(spec.R > spec.eps)) throw DomainError("prism needs 0 < eps < R");
  const double far = std::isinf(spec.R) ? 0.0 : std::pow(spec.R, -2 * s);
  return frac_constant_nd(N, s) * cap_area(spec.alpha, N) * (std::pow(spec.eps, -2 * s) - far) / (2 * s);
}

double prism_average(const TestFunction& phi, const Vec& x, const PrismSpec& spec, double s, const QuadSpec& quad) {
  check_order(s);
  spec.validate();
  if (x.n != phi.dim || spec.axis.n != x.n) throw DomainError("prism dimensions do not match the test function");
  const QuadSpec q = quad_near(phi, x, quad);
  Vec p;
  if (phi.has_gradient()) p = phi.gradient(x);
  return prism_average_impl(phi, x, spec, s, q, phi.has_gradient() ? &p : nullptr, phi(x));
}

PrismParts prism_parts(const TestFunction& phi, const Vec& x, double eps, double R, double alpha, double s,
                       const CoreSpec& spec) {
  check_order(s);
  PrismSpec ps{eps, R, alpha, Vec(x.n)};
  ps.axis[0] = 1.0;
  ps.validate();
  if (x.n != phi.dim) throw DomainError("point dimension does not match the test function");
  const QuadSpec q = quad_near(phi, x, spec.quad);
  Vec p;
  if (phi.has_gradient()) p = phi.gradient(x);
  const Vec* pp = phi.has_gradient() ? &p : nullptr;
  const double px = phi(x);
  auto avg = [&](const Vec& y) {
    PrismSpec t = ps;
    t.axis = y;
    return prism_average_impl(phi, x, t, s, q, pp, px);
  };
  const auto [mx, mn] = sphere_extrema(avg, x.n, spec.opt);
  return {mx.value, mn.value, mx.argopt, mn.argopt};
}

double average_prism_o(const TestFunction& phi, const Vec& x, double eps, double R, double alpha, double s,
                       const CoreSpec& spec) {
  return prism_parts(phi, x, eps, R, alpha, s, spec).value();
}

std::vector<Vec> grid_directions(int N, int n) {
  if (n < 2) throw DomainError("need at least 2 grid directions");
  if (N == 1) return {Vec{-1.0}, Vec{1.0}};
  std::vector<Vec> out;
  if (N == 2) {
    // Multiples of pi/4 are produced exactly so that prism edges lying on
    // lattice lines are excluded consistently by the strict inequalities.
    constexpr double r = std::numbers::sqrt2 / 2;
    static const double axes[8][2] = {{1, 0}, {r, r}, {0, 1}, {-r, r}, {-1, 0}, {-r, -r}, {0, -1}, {r, -r}};
    for (int i = 1; i <= n; ++i) {
      const long k = (8L * i) % (8L * n);
      if (k % n == 0) {
        const auto& a = axes[k / n];
        out.push_back(Vec{a[0], a[1]});
      } else {
        out.push_back(Vec{std::cos(2 * kPi * i / n), std::sin(2 * kPi * i / n)});
      }
    }
    return out;
  }
  if (N != 3) throw UnsupportedDimension("grid directions need N = 1, 2 or 3");
  OptSpec o;
  o.seeds_3d = n;
  return sphere_seeds(3, o);
}

std::vector<StencilPoint> prism_stencil(const PrismSpec& spec, double s, double h) {
  check_order(s);
  spec.validate();
  if (!(h > 0)) throw DomainError("mesh width must be positive");
  const int N = spec.axis.n;
  const double side = spec.R * std::sin(cap_half_angle(spec.alpha));
  std::array<long, 3> lo{}, hi{};
  for (int i = 0; i < N; ++i) {
    const double a = std::min(0.0, spec.R * spec.axis[i]) - side;
    const double b = std::max(0.0, spec.R * spec.axis[i]) + side;
    lo[i] = static_cast<long>(std::floor(a / h)) - 1;
    hi[i] = static_cast<long>(std::ceil(b / h)) + 1;
  }
  struct Key {
    long mm;
    std::array<long, 3> m;
  };
  std::vector<Key> keys;
  std::array<long, 3> m{};
  // Odometer over the box.
  for (int i = 0; i < N; ++i) m[i] = lo[i];
  while (true) {
    Vec z(N);
    long mm = 0;
    for (int i = 0; i < N; ++i) {
      z[i] = h * static_cast<double>(m[i]);
      mm += m[i] * m[i];
    }
    if (prism_contains(spec, z)) keys.push_back({mm, m});
    int d = N - 1;
    while (d >= 0 && m[d] == hi[d]) m[d] = lo[d], --d;
    if (d < 0) break;
    ++m[d];
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.mm != b.mm) return a.mm < b.mm;
    return a.m < b.m;
  });
  std::vector<StencilPoint> out;
  out.reserve(keys.size());
  const double expo = -0.5 * (N + 2 * s);
  for (const auto& k : keys) {
    StencilPoint p;
    p.m = k.m;
    p.x = Vec(N);
    for (int i = 0; i < N; ++i) p.x[i] = h * static_cast<double>(k.m[i]);
    p.weight = std::pow(h * h * static_cast<double>(k.mm), expo);
    out.push_back(std::move(p));
  }
  return out;
}

void write_stencil_csv(std::ostream& os, const std::vector<StencilPoint>& pts) {
  const int N = pts.empty() ? 0 : pts.front().x.n;
  for (int i = 0; i < N; ++i) os << "x" << (i + 1) << ",";
  os << "weight\n";
  os << std::setprecision(17);
  for (const auto& p : pts) {
    for (int i = 0; i < N; ++i) os << p.x[i] << ",";
    os << p.weight << "\n";
  }
}

double average_discrete(const TestFunction& phi, const Vec& xk, double eps, double R, double alpha, double s,
                        const GridSpec& grid) {
  check_order(s);
  if (xk.n != phi.dim) throw DomainError("point dimension does not match the test function");
  if (!(grid.h > 0 && grid.h < eps)) throw DomainError("mesh width must satisfy 0 < h < eps");
  const int N = xk.n;
  double best = -std::numeric_limits<double>::infinity(), worst = std::numeric_limits<double>::infinity();
  for (const auto& dir : grid_directions(N, grid.n_directions)) {
    PrismSpec ps{eps, R, alpha, dir};
    const auto pts = prism_stencil(ps, s, grid.h);
    if (pts.empty()) {
      std::ostringstream msg;
      msg << "empty prism stencil for h=" << grid.h << " eps=" << eps << " alpha=" << alpha;
      throw DegenerateStencil(msg.str());
    }
    double sum = 0.0;
    for (const auto& p : pts) sum += phi(xk + p.x) * p.weight;
    best = std::max(best, sum);
    worst = std::min(worst, sum);
  }
  const double pref =
      s * std::pow(grid.h, N) / (cap_area(alpha, N) * (std::pow(eps, -2 * s) - std::pow(R, -2 * s)));
  return pref * (best + worst);
}

}  // namespace fraclap
