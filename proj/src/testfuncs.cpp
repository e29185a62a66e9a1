#include "fraclap/testfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

using Params = std::map<std::string, std::vector<double>>;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

Params parse_params(const std::string& text) {
  Params p;
  std::stringstream ss(text);
  std::string kv;
  while (std::getline(ss, kv, ';')) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("entry parameter '" + kv + "' is not key=value");
    p[kv.substr(0, eq)] = parse_list(kv.substr(eq + 1));
  }
  return p;
}

double scalar(const Params& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  if (it->second.size() != 1) throw DomainError("parameter '" + key + "' expects one value");
  return it->second[0];
}

Vec vector_param(const Params& p, const std::string& key, const Vec& dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  if (it->second.empty() || it->second.size() > kMaxDim) throw DomainError("parameter '" + key + "' needs 1 to 3 values");
  Vec v(static_cast<int>(it->second.size()));
  for (std::size_t i = 0; i < it->second.size(); ++i) v[static_cast<int>(i)] = it->second[i];
  return v;
}

int dim_param(const Params& p, int dflt) {
  const double d = scalar(p, "dim", dflt);
  if (d != std::floor(d) || d < 1 || d > kMaxDim) throw UnsupportedDimension("dim must be 1, 2 or 3");
  return static_cast<int>(d);
}

void check_keys(const Params& p, std::initializer_list<const char*> allowed, const std::string& name) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw DomainError("entry '" + name + "' has no parameter '" + k + "'");
  }
}

Vec zeros(int n) { return Vec(n); }

Vec fibonacci_point(int i, int n) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * i + 1.0) / n;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec{r * std::cos(golden * i), r * std::sin(golden * i), z};
}

// Deterministic search for max of g over the closed ball B(x, r).
double ball_sup(const std::function<double(const Vec&)>& g, const Vec& x, double r) {
  const int n = x.n;
  std::vector<std::pair<double, Vec>> samples;
  auto add = [&](const Vec& y) { samples.emplace_back(g(y), y); };
  add(x);
  if (n == 1) {
    for (int i = -200; i <= 200; ++i) add(x + Vec{r * i / 200.0});
  } else if (n == 2) {
    for (int k = 1; k <= 16; ++k)
      for (int j = 0; j < 64; ++j) {
        const double th = 2 * kPi * j / 64, rr = r * k / 16.0;
        add(x + Vec{rr * std::cos(th), rr * std::sin(th)});
      }
  } else {
    for (int k = 1; k <= 12; ++k)
      for (int j = 0; j < 200; ++j) add(x + (r * k / 12.0) * fibonacci_point(j, 200));
  }
  std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = samples.front().first;
  const int starts = std::min<int>(4, static_cast<int>(samples.size()));
  for (int st = 0; st < starts; ++st) {
    Vec y = samples[st].second;
    double val = samples[st].first;
    double step = r / 16.0;
    while (step > r * 1e-7) {
      bool moved = false;
      for (int d = 0; d < n && !moved; ++d)
        for (double sg : {1.0, -1.0}) {
          Vec z = y;
          z[d] += sg * step;
          const Vec off = z - x;
          const double len = norm(off);
          if (len > r) z = x + (r / len) * off;
          const double v = g(z);
          if (v > val) {
            val = v;
            y = z;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, val);
  }
  return best;
}

// Max of |cos| over the interval [lo, hi].
double max_abs_cos(double lo, double hi) {
  if (std::floor(hi / kPi) > std::floor(lo / kPi) || std::fmod(lo, kPi) == 0.0) return 1.0;
  return std::max(std::abs(std::cos(lo)), std::abs(std::cos(hi)));
}

// Quintic smoothstep, C^2 from 0 to 1 on [0,1].
double smoothstep5(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return u * u * u * (10 - 15 * u + 6 * u * u);
}
double smoothstep5_d(double u) {
  if (u <= 0 || u >= 1) return 0;
  return 30 * u * u * (1 - u) * (1 - u);
}
double smoothstep5_dd(double u) {
  if (u <= 0 || u >= 1) return 0;
  return 60 * u * (1 - u) * (1 - 2 * u);
}

// ---------------------------------------------------------------------------

TestFunction make_constant(const Params& p) {
  check_keys(p, {"c", "dim", "x"}, "constant");
  const int n = dim_param(p, 2);
  const double c = scalar(p, "c", 1.0);
  TestFunction f;
  f.name = "constant";
  f.description = "constant function";
  f.dim = n;
  f.eval = [c](const Vec&) { return c; };
  f.gradient = [n](const Vec&) { return zeros(n); };
  f.hessian = [n](const Vec&) { return Mat(n); };
  f.sup_norm = std::abs(c);
  f.eta = [](const Vec&) { return 1.0; };
  f.c_bound = [](const Vec&) { return 0.0; };
  f.lipschitz = 0.0;
  f.point = vector_param(p, "x", zeros(n));
  f.exact_lap_frac = [](const Vec&, double) { return std::optional<double>(0.0); };
  return f;
}

TestFunction make_cosine(const Params& p) {
  check_keys(p, {"xi", "eta", "x"}, "cosine");
  const Vec xi = vector_param(p, "xi", Vec{1.0, 0.0});
  const int n = xi.n;
  const double k = norm(xi);
  if (!(k > 0)) throw DomainError("cosine needs a nonzero frequency");
  const double eta = scalar(p, "eta", 0.5);
  TestFunction f;
  f.name = "cosine";
  f.description = "plane wave cos<xi,z>";
  f.dim = n;
  f.eval = [xi](const Vec& z) { return std::cos(dot(xi, z)); };
  f.gradient = [xi](const Vec& z) { return -std::sin(dot(xi, z)) * xi; };
  f.hessian = [xi](const Vec& z) { return -std::cos(dot(xi, z)) * outer(xi, xi); };
  f.sup_norm = 1.0;
  f.eta = [eta](const Vec&) { return eta; };
  f.c_bound = [xi, k, eta](const Vec& x) {
    const double c = dot(xi, x);
    return 0.5 * k * k * max_abs_cos(c - k * eta, c + k * eta);
  };
  f.lipschitz = k;
  f.point = vector_param(p, "x", (1.1 / (k * k)) * xi);
  f.exact_lap_frac = [xi, k, n](const Vec& x, double s) -> std::optional<double> {
    const double c = dot(xi, x);
    const double sym = std::pow(k, 2 * s);
    if (k * std::abs(std::sin(c)) > 1e-10) return -sym * std::cos(c);
    // Critical point: the sup over y can pick y orthogonal to xi when N >= 2.
    const double cc = std::cos(c);
    if (n == 1) return -sym * cc;
    return cc > 0 ? -0.5 * sym : 0.5 * sym;
  };
  return f;
}

TestFunction make_gaussian(const Params& p) {
  check_keys(p, {"dim", "b", "eta", "x"}, "gaussian");
  int n = dim_param(p, 2);
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = 1.0;
  b = vector_param(p, "b", b);
  if (p.count("b")) n = b.n;
  for (int i = 0; i < n; ++i)
    if (!(b[i] > 0)) throw DomainError("gaussian weights must be positive");
  bool iso = true;
  double bmax = 0;
  for (int i = 0; i < n; ++i) {
    iso = iso && b[i] == b[0];
    bmax = std::max(bmax, b[i]);
  }
  const double eta = scalar(p, "eta", 0.5);
  TestFunction f;
  f.name = "gaussian";
  f.description = iso ? "Gaussian exp(-b|z|^2)" : "anisotropic Gaussian exp(-sum b_i z_i^2)";
  f.dim = n;
  auto q = [b](const Vec& z) {
    double s = 0;
    for (int i = 0; i < z.n; ++i) s += b[i] * z[i] * z[i];
    return s;
  };
  auto bz = [b](const Vec& z) {
    Vec r(z.n);
    for (int i = 0; i < z.n; ++i) r[i] = b[i] * z[i];
    return r;
  };
  f.eval = [q](const Vec& z) { return std::exp(-q(z)); };
  f.gradient = [q, bz](const Vec& z) { return (-2.0 * std::exp(-q(z))) * bz(z); };
  f.hessian = [q, bz, b](const Vec& z) {
    const Vec v = bz(z);
    Mat h = 4.0 * outer(v, v);
    for (int i = 0; i < z.n; ++i) h(i, i) -= 2.0 * b[i];
    return std::exp(-q(z)) * h;
  };
  f.sup_norm = 1.0;
  f.eta = [eta](const Vec&) { return eta; };
  f.lipschitz = std::sqrt(2.0 * bmax) * std::exp(-0.5);
  f.point = vector_param(p, "x", zeros(n));
  if (iso) {
    const double bb = b[0];
    // |H| = max(2b, |4b^2 r^2 - 2b|) e^{-b r^2}; as a function of u = b r^2 it
    // decreases on u <= 1 and peaks at u = 3/2 on u >= 1.
    f.c_bound = [bb, eta](const Vec& x) {
      const double r0 = norm(x);
      const double lo = std::max(0.0, r0 - eta), hi = r0 + eta;
      auto g = [bb](double r) {
        const double u = bb * r * r;
        return std::max(2.0 * bb, std::abs(4.0 * bb * u - 2.0 * bb)) * std::exp(-u);
      };
      double m = std::max(g(lo), g(hi));
      const double rpk = std::sqrt(1.5 / bb);
      if (rpk > lo && rpk < hi) m = std::max(m, g(rpk));
      return 0.5 * m;
    };
  } else {
    auto hess = f.hessian;
    f.c_bound = [hess, eta](const Vec& x) {
      return 0.5 * ball_sup([&](const Vec& y) { return spectral_norm(hess(y)); }, x, eta);
    };
  }
  return f;
}

TestFunction make_bump(const Params& p) {
  check_keys(p, {"dim", "eta", "x"}, "bump");
  const int n = dim_param(p, 2);
  const double eta = scalar(p, "eta", 0.25);
  // phi = g(|z|^2) with g(u) = exp(1 - 1/(1-u)) for u < 1.
  auto g = [](double u) { return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0; };
  auto g1 = [g](double u) { return u < 1.0 ? -g(u) / ((1 - u) * (1 - u)) : 0.0; };
  auto g2 = [g](double u) {
    if (u >= 1.0) return 0.0;
    const double v = 1 - u;
    return g(u) * (1.0 / (v * v * v * v) - 2.0 / (v * v * v));
  };
  TestFunction f;
  f.name = "bump";
  f.description = "compact bump exp(1 - 1/(1-|z|^2))";
  f.dim = n;
  f.eval = [g](const Vec& z) { return g(dot(z, z)); };
  f.gradient = [g1](const Vec& z) { return (2.0 * g1(dot(z, z))) * z; };
  f.hessian = [g1, g2, n](const Vec& z) {
    const double u = dot(z, z);
    return 2.0 * g1(u) * identity(n) + 4.0 * g2(u) * outer(z, z);
  };
  f.sup_norm = 1.0;
  f.eta = [eta](const Vec&) { return eta; };
  // Hessian eigenvalues: 2g' (tangential, N >= 2) and 2g' + 4u g'' (radial).
  auto hnorm = [g1, g2, n](double r) {
    const double u = r * r;
    const double rad = std::abs(2 * g1(u) + 4 * u * g2(u));
    return n >= 2 ? std::max(rad, std::abs(2 * g1(u))) : rad;
  };
  auto scan_max = [](const std::function<double(double)>& h, double lo, double hi) {
    double best = 0, arg = lo;
    const int m = 4000;
    for (int i = 0; i <= m; ++i) {
      const double r = lo + (hi - lo) * i / m;
      const double v = h(r);
      if (v > best) best = v, arg = r;
    }
    double a = std::max(lo, arg - (hi - lo) / m), c = std::min(hi, arg + (hi - lo) / m);
    for (int it = 0; it < 80; ++it) {
      const double m1 = a + (c - a) * 0.381966, m2 = a + (c - a) * 0.618034;
      if (h(m1) < h(m2)) a = m1; else c = m2;
    }
    return std::max(best, h(0.5 * (a + c)));
  };
  f.c_bound = [hnorm, scan_max, eta](const Vec& x) {
    const double r0 = norm(x);
    const double lo = std::max(0.0, r0 - eta), hi = std::min(1.0, r0 + eta);
    return lo >= 1.0 ? 0.0 : 0.5 * scan_max(hnorm, lo, hi);
  };
  f.lipschitz = scan_max([g1](double r) { return 2 * r * std::abs(g1(r * r)); }, 0.0, 1.0);
  f.point = vector_param(p, "x", n == 1 ? Vec{0.3} : (n == 2 ? Vec{0.3, 0.2} : Vec{0.3, 0.2, 0.1}));
  return f;
}

TestFunction make_tent(const Params& p) {
  check_keys(p, {"dim", "aniso", "z0", "x"}, "tent");
  const int n = dim_param(p, 2);
  const double an = scalar(p, "aniso", n == 1 ? 1.0 : 0.5);
  if (!(an > 0 && an <= 1)) throw DomainError("tent aniso must lie in (0,1]");
  const Vec z0 = vector_param(p, "z0", zeros(n));
  // A = diag(1, aniso, aniso); phi = max(0, 1 - |A(z - z0)|).
  auto amul = [an](const Vec& w) {
    Vec r = w;
    for (int i = 1; i < w.n; ++i) r[i] *= an;
    return r;
  };
  TestFunction f;
  f.name = "tent";
  f.description = "anisotropic tent max(0, 1 - |A(z - z0)|)";
  f.dim = n;
  f.eval = [amul, z0](const Vec& z) { return std::max(0.0, 1.0 - norm(amul(z - z0))); };
  f.gradient = [amul, z0, n](const Vec& z) {
    const Vec aw = amul(z - z0);
    const double len = norm(aw);
    if (len >= 1.0 || len == 0.0) return zeros(n);
    return (-1.0 / len) * amul(aw);
  };
  f.hessian = [amul, z0, n](const Vec& z) {
    const Vec aw = amul(z - z0);
    const double len = norm(aw);
    if (len >= 1.0 || len == 0.0) return Mat(n);
    Mat ata(n);
    for (int i = 0; i < n; ++i) {
      Vec e(n);
      e[i] = 1.0;
      ata(i, i) = amul(amul(e))[i];
    }
    const Vec g = amul(aw);
    return (-1.0 / len) * (ata - (1.0 / (len * len)) * outer(g, g));
  };
  f.sup_norm = 1.0;
  // Kinks sit at z0 and on |A(z - z0)| = 1; the latter is at least
  // (1 - |A(x - z0)|) away since |A| <= 1.
  f.eta = [amul, z0](const Vec& x) {
    const double r0 = norm(x - z0), inner = norm(amul(x - z0));
    return 0.5 * std::min(r0, 1.0 - inner);
  };
  auto hess = f.hessian;
  auto eta = f.eta;
  f.c_bound = [hess, eta, an, z0, n](const Vec& x) {
    const double e = eta(x);
    if (an == 1.0) return n >= 2 ? 0.5 / (norm(x - z0) - e) : 0.0;
    return 0.5 * ball_sup([&](const Vec& y) { return spectral_norm(hess(y)); }, x, e);
  };
  f.lipschitz = 1.0;
  f.point = vector_param(p, "x", n == 1 ? Vec{0.4} : (n == 2 ? Vec{0.4, 0.3} : Vec{0.4, 0.3, 0.2}));
  return f;
}

TestFunction make_holder(const Params& p) {
  check_keys(p, {"dim", "alpha", "x"}, "holder");
  const int n = dim_param(p, 2);
  const double al = scalar(p, "alpha", 0.5);
  if (!(al > 0 && al < 1)) throw DomainError("holder alpha must lie in (0,1)");
  TestFunction f;
  f.name = "holder";
  f.description = "capped cone min(|z|^alpha, 1)";
  f.dim = n;
  f.eval = [al](const Vec& z) { return std::min(std::pow(norm(z), al), 1.0); };
  f.gradient = [al, n](const Vec& z) {
    const double r = norm(z);
    if (r >= 1.0 || r == 0.0) return zeros(n);
    return (al * std::pow(r, al - 2.0)) * z;
  };
  f.hessian = [al, n](const Vec& z) {
    const double r = norm(z);
    if (r >= 1.0 || r == 0.0) return Mat(n);
    const Vec u = (1.0 / r) * z;
    return (al * std::pow(r, al - 2.0)) * (identity(n) + (al - 2.0) * outer(u, u));
  };
  f.sup_norm = 1.0;
  f.eta = [](const Vec& x) {
    const double r0 = norm(x);
    return 0.5 * std::min(r0, 1.0 - r0);
  };
  auto eta = f.eta;
  // Eigenvalues alpha r^{alpha-2} (tangential) and alpha(alpha-1) r^{alpha-2}.
  f.c_bound = [al, n, eta](const Vec& x) {
    const double r = norm(x) - eta(x);
    return 0.5 * al * std::pow(r, al - 2.0) * (n >= 2 ? 1.0 : 1.0 - al);
  };
  f.holder_seminorm = 1.0;
  f.holder_alpha = al;
  f.point = vector_param(p, "x", n == 1 ? Vec{0.5} : (n == 2 ? Vec{0.3, 0.4} : Vec{0.3, 0.4, 0.0}));
  return f;
}

TestFunction make_quadratic(const Params& p) {
  check_keys(p, {"p", "h", "x"}, "quadratic");
  const Vec pv = vector_param(p, "p", Vec{1.0, 0.0});
  const int n = pv.n;
  const double h = scalar(p, "h", 1.0);
  // (<p,z> + h|z|^2/2) times a C^2 radial cutoff equal to 1 on |z| <= 1, 0 on |z| >= 2.
  auto chi = [](double r) { return 1.0 - smoothstep5(r - 1.0); };
  auto chi1 = [](double r) { return -smoothstep5_d(r - 1.0); };
  auto chi2 = [](double r) { return -smoothstep5_dd(r - 1.0); };
  TestFunction f;
  f.name = "quadratic";
  f.description = "quadratic <p,z> + h|z|^2/2 cut off smoothly outside the unit ball";
  f.dim = n;
  f.eval = [pv, h, chi](const Vec& z) { return (dot(pv, z) + 0.5 * h * dot(z, z)) * chi(norm(z)); };
  f.gradient = [pv, h, chi, chi1](const Vec& z) {
    const double r = norm(z);
    const double q = dot(pv, z) + 0.5 * h * dot(z, z);
    const Vec gq = pv + h * z;
    if (r <= 1.0) return gq;
    return chi(r) * gq + (q * chi1(r) / r) * z;
  };
  f.hessian = [pv, h, chi, chi1, chi2, n](const Vec& z) {
    const double r = norm(z);
    if (r <= 1.0) return h * identity(n);
    const double q = dot(pv, z) + 0.5 * h * dot(z, z);
    const Vec gq = pv + h * z;
    const Vec u = (1.0 / r) * z;
    const Vec gchi = chi1(r) * u;
    const Mat hchi = chi2(r) * outer(u, u) + (chi1(r) / r) * (identity(n) - outer(u, u));
    return chi(r) * h * identity(n) + outer(gq, gchi) + outer(gchi, gq) + q * hchi;
  };
  const double pn = norm(pv);
  f.sup_norm = 2.0 * pn + 2.0 * std::abs(h);
  f.eta = [](const Vec& x) { return std::max(1e-3, 1.0 - norm(x)); };
  auto eta = f.eta;
  auto hess = f.hessian;
  f.c_bound = [h, eta, hess](const Vec& x) {
    const double e = eta(x);
    if (norm(x) + e <= 1.0) return 0.5 * std::abs(h);
    return 0.5 * ball_sup([&](const Vec& y) { return spectral_norm(hess(y)); }, x, e);
  };
  // |grad q| chi + |q| |chi'| on |z| <= 2, with max |chi'| = 15/8.
  f.lipschitz = pn + 2 * std::abs(h) + (2 * pn + 2 * std::abs(h)) * 1.875;
  f.point = zeros(n);
  return f;
}

const std::map<std::string, std::function<TestFunction(const Params&)>>& builders() {
  static const std::map<std::string, std::function<TestFunction(const Params&)>> m = {
      {"constant", make_constant}, {"cosine", make_cosine}, {"gaussian", make_gaussian},
      {"bump", make_bump},         {"tent", make_tent},     {"holder", make_holder},
      {"quadratic", make_quadratic}};
  return m;
}

}  // namespace

double modulus_of(const TestFunction& phi, double a) {
  if (a < 0) throw DomainError("modulus argument must be nonnegative");
  if (a == 0) return 0.0;
  if (phi.lipschitz) return std::min(*phi.lipschitz * a, 2.0 * phi.sup_norm);
  if (phi.holder_seminorm) return *phi.holder_seminorm * std::pow(a, phi.holder_alpha);
  if (phi.modulus) return phi.modulus(a);
  return 2.0 * phi.sup_norm;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builders()) out.push_back(k);
  return out;
}

TestFunction make_entry(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  auto it = builders().find(name);
  if (it == builders().end()) throw DomainError("unknown catalog entry '" + name + "'");
  const Params p = colon == std::string::npos ? Params{} : parse_params(spec.substr(colon + 1));
  TestFunction f = it->second(p);
  if (f.point.n != f.dim) throw DomainError("point dimension does not match entry '" + name + "'");
  f.name = spec;
  return f;
}

std::vector<TestFunction> catalog() {
  std::vector<TestFunction> out;
  for (const char* s : {"constant", "cosine", "cosine:xi=1,0;x=0,0", "gaussian", "gaussian:b=1,0.3;x=0.5,0.4",
                        "bump", "tent", "holder", "quadratic"})
    out.push_back(make_entry(s));
  return out;
}

double sup_hessian_norm(const TestFunction& phi, const Vec& x, double r) {
  if (!phi.hessian) throw PreconditionError("entry '" + phi.name + "' has no Hessian");
  return ball_sup([&](const Vec& y) { return spectral_norm(phi.hessian(y)); }, x, r);
}

double hessian_oscillation(const TestFunction& phi, const Vec& x, double r) {
  if (!phi.hessian) throw PreconditionError("entry '" + phi.name + "' has no Hessian");
  const Mat hx = phi.hessian(x);
  return ball_sup([&](const Vec& y) { return spectral_norm(phi.hessian(y) - hx); }, x, r);
}

TestFunction rescaled(const TestFunction& phi, double lam) {
  TestFunction f = phi;
  f.name = phi.name + "@scale";
  f.eval = [phi, lam](const Vec& z) { return phi.eval(lam * z); };
  if (phi.gradient) f.gradient = [phi, lam](const Vec& z) { return lam * phi.gradient(lam * z); };
  if (phi.hessian) f.hessian = [phi, lam](const Vec& z) { return (lam * lam) * phi.hessian(lam * z); };
  f.eta = [phi, lam](const Vec& x) { return phi.eta(lam * x) / lam; };
  f.c_bound = [phi, lam](const Vec& x) { return lam * lam * phi.c_bound(lam * x); };
  if (phi.lipschitz) f.lipschitz = lam * *phi.lipschitz;
  if (phi.holder_seminorm) f.holder_seminorm = std::pow(lam, phi.holder_alpha) * *phi.holder_seminorm;
  if (phi.modulus) f.modulus = [phi, lam](double a) { return phi.modulus(lam * a); };
  f.point = (1.0 / lam) * phi.point;
  if (phi.exact_lap_frac)
    f.exact_lap_frac = [phi, lam](const Vec& x, double s) -> std::optional<double> {
      auto v = phi.exact_lap_frac(lam * x, s);
      if (!v) return std::nullopt;
      return std::pow(lam, 2 * s) * *v;
    };
  return f;
}

TestFunction translated(const TestFunction& phi, const Vec& shift) {
  TestFunction f = phi;
  f.name = phi.name + "@shift";
  f.eval = [phi, shift](const Vec& z) { return phi.eval(z + shift); };
  if (phi.gradient) f.gradient = [phi, shift](const Vec& z) { return phi.gradient(z + shift); };
  if (phi.hessian) f.hessian = [phi, shift](const Vec& z) { return phi.hessian(z + shift); };
  f.eta = [phi, shift](const Vec& x) { return phi.eta(x + shift); };
  f.c_bound = [phi, shift](const Vec& x) { return phi.c_bound(x + shift); };
  f.point = phi.point - shift;
  if (phi.exact_lap_frac)
    f.exact_lap_frac = [phi, shift](const Vec& x, double s) { return phi.exact_lap_frac(x + shift, s); };
  return f;
}

TestFunction negated(const TestFunction& phi) {
  TestFunction f = phi;
  f.name = "-" + phi.name;
  f.eval = [phi](const Vec& z) { return -phi.eval(z); };
  if (phi.gradient) f.gradient = [phi](const Vec& z) { return -phi.gradient(z); };
  if (phi.hessian) f.hessian = [phi](const Vec& z) { return -1.0 * phi.hessian(z); };
  if (phi.exact_lap_frac)
    f.exact_lap_frac = [phi](const Vec& x, double s) -> std::optional<double> {
      auto v = phi.exact_lap_frac(x, s);
      if (!v) return std::nullopt;
      return -*v;
    };
  return f;
}

}  // namespace fraclap
