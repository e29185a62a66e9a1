#include "fraclap/sphereopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

template <class V>
struct Traits;

template <>
struct Traits<double> {
  static bool less(double a, double b, const OptSpec&) { return a < b; }
  static bool tie(double a, double b, const OptSpec& sp) { return std::abs(a - b) <= sp.tol; }
  static double neg(double a) { return -a; }
  static constexpr bool kPolish = false;
  static double key(double a, int) { return a; }
};

template <>
struct Traits<DivergentValue> {
  static bool less(const DivergentValue& a, const DivergentValue& b, const OptSpec& sp) {
    if (std::abs(a.rate - b.rate) > sp.rate_tol) return a.rate < b.rate;
    return a.finite < b.finite;
  }
  static bool tie(const DivergentValue& a, const DivergentValue& b, const OptSpec& sp) {
    return std::abs(a.rate - b.rate) <= sp.rate_tol && std::abs(a.finite - b.finite) <= sp.tol;
  }
  static DivergentValue neg(const DivergentValue& a) { return {-a.rate, -a.finite}; }
  // The rate tolerance leaves a flat band around the optimum; a parabolic
  // step on the rate itself recovers the direction inside it.
  static constexpr bool kPolish = true;
  static double key(const DivergentValue& a, int k) { return k == 0 ? a.rate : a.finite; }
};

void check_dim(int N) {
  if (N < 1 || N > kMaxDim) throw UnsupportedDimension("direction search supports N = 1, 2, 3");
}

Vec from_angle(double th) { return Vec{std::cos(th), std::sin(th)}; }

Vec cross(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::pair<Vec, Vec> tangent_basis(const Vec& y) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(y[i]) < std::abs(y[k])) k = i;
  Vec e(3);
  e[k] = 1.0;
  const Vec u = normalized(e - dot(e, y) * y);
  return {u, cross(y, u)};
}

template <class V>
struct Point {
  Vec dir;
  V val;
};

// Better of two points under the tolerant order; ties go to the lexicographically smaller direction.
template <class V>
bool better(const Point<V>& a, const Point<V>& b, const OptSpec& sp) {
  using T = Traits<V>;
  if (T::tie(a.val, b.val, sp)) return lex_less(a.dir, b.dir);
  return T::less(b.val, a.val, sp);
}

template <class V>
std::vector<int> candidate_order(const std::vector<Vec>& seeds, const std::vector<V>& vals, const OptSpec& sp,
                                 bool ring) {
  using T = Traits<V>;
  const int n = static_cast<int>(seeds.size());
  std::vector<int> idx;
  for (int j = 0; j < n; ++j) {
    if (ring) {
      const int l = (j + n - 1) % n, r = (j + 1) % n;
      if (T::less(vals[j], vals[l], sp) || T::less(vals[j], vals[r], sp)) continue;
    }
    idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return better(Point<V>{seeds[a], vals[a]}, Point<V>{seeds[b], vals[b]}, sp);
  });
  if (static_cast<int>(idx.size()) > sp.refine_candidates) idx.resize(sp.refine_candidates);
  return idx;
}

template <class V>
Extremum<V> refine_circle(const DirFnT<V>& obj, double th0, const V& v0, double half, const OptSpec& sp) {
  using T = Traits<V>;
  Point<V> best{from_angle(th0), v0};
  double best_th = th0;
  auto consider = [&](double th, const V& v) {
    Point<V> p{from_angle(th), v};
    if (T::less(best.val, v, sp)) best = p, best_th = th;
  };
  double a = th0 - half, b = th0 + half;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  V fc = obj(from_angle(c)), fd = obj(from_angle(d));
  consider(c, fc);
  consider(d, fd);
  int it = 0;
  for (; it < sp.max_iterations; ++it) {
    if (T::less(fc, fd, sp)) {
      a = c, c = d, fc = fd;
      d = a + kGolden * (b - a);
      fd = obj(from_angle(d));
      consider(d, fd);
    } else {
      b = d, d = c, fd = fc;
      c = b - kGolden * (b - a);
      fc = obj(from_angle(c));
      consider(c, fc);
    }
  }
  if constexpr (T::kPolish) {
    const double h = std::max(b - a, 1e-3);
    const V fm = obj(from_angle(best_th - h)), fp = obj(from_angle(best_th + h));
    int key = 0;
    const double k0 = T::key(best.val, 0);
    const double spread = std::max({T::key(fm, 0), k0, T::key(fp, 0)}) - std::min({T::key(fm, 0), k0, T::key(fp, 0)});
    if (spread <= sp.rate_tol) key = 1;
    const double ym = T::key(fm, key), y0 = T::key(best.val, key), yp = T::key(fp, key);
    const double den = ym - 2 * y0 + yp;
    if (den < 0) {
      const double step = 0.5 * h * (ym - yp) / den;
      if (std::abs(step) <= h) {
        const double th = best_th + step;
        const V v = obj(from_angle(th));
        if (T::key(v, key) >= y0) best = {from_angle(th), v}, best_th = th;
      }
    }
  }
  Extremum<V> r;
  r.argopt = best.dir;
  r.value = best.val;
  r.iterations = it;
  r.achieved_tol = b - a;
  return r;
}

template <class V>
Extremum<V> refine_sphere(const DirFnT<V>& obj, const Vec& y0, const V& v0, double step, const OptSpec& sp) {
  using T = Traits<V>;
  Vec y = y0;
  V val = v0;
  int contractions = 0;
  while (contractions < sp.max_iterations) {
    const auto [u, w] = tangent_basis(y);
    bool moved = false;
    Vec best_y = y;
    V best_v = val;
    for (const Vec& d : {u, -u, w, -w}) {
      const Vec z = normalized(y + step * d);
      const V v = obj(z);
      if (T::less(best_v, v, sp)) best_v = v, best_y = z, moved = true;
    }
    if (moved) {
      y = best_y;
      val = best_v;
    } else {
      step *= sp.contraction;
      ++contractions;
    }
  }
  Extremum<V> r;
  r.argopt = y;
  r.value = val;
  r.iterations = contractions;
  r.achieved_tol = step;
  return r;
}

template <class V>
Extremum<V> maximize(const DirFnT<V>& obj, int N, const OptSpec& sp, const std::vector<Vec>& seeds,
                     const std::vector<V>& vals) {
  const int n = static_cast<int>(seeds.size());
  Extremum<V> out;
  if (N == 1) {
    const Point<V> a{seeds[0], vals[0]}, b{seeds[1], vals[1]};
    const Point<V>& w = better(a, b, sp) ? a : b;
    out.argopt = w.dir;
    out.value = w.val;
    out.seeds = 2;
    return out;
  }
  const auto order = candidate_order(seeds, vals, sp, N == 2);
  std::vector<Extremum<V>> found;
  for (int j : order) {
    if (N == 2) {
      const double th = 2 * kPi * j / n;
      found.push_back(refine_circle(obj, th, vals[j], 2 * kPi / n, sp));
    } else {
      found.push_back(refine_sphere(obj, seeds[j], vals[j], std::sqrt(4 * kPi / n), sp));
    }
  }
  out = found.front();
  for (const auto& f : found)
    if (better(Point<V>{f.argopt, f.value}, Point<V>{out.argopt, out.value}, sp)) out = f;
  out.seeds = n;
  return out;
}

template <class V>
Extremum<V> negate(Extremum<V> e) {
  e.value = Traits<V>::neg(e.value);
  return e;
}

template <class V>
DirFnT<V> negated_fn(const DirFnT<V>& obj) {
  return [obj](const Vec& y) { return Traits<V>::neg(obj(y)); };
}

}  // namespace

void OptSpec::validate() const {
  if (seeds_2d < 8 || seeds_3d < 8) throw DomainError("direction search needs at least 8 seeds");
  if (max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (!(contraction > 0 && contraction < 1)) throw DomainError("contraction must lie in (0,1)");
  if (!(tol >= 0) || !(rate_tol >= 0)) throw DomainError("tolerances must be nonnegative");
  if (refine_candidates < 1 || ball_shells < 1) throw DomainError("refine_candidates and ball_shells must be positive");
}

std::vector<Vec> sphere_seeds(int N, const OptSpec& spec) {
  check_dim(N);
  std::vector<Vec> out;
  if (N == 1) return {Vec{-1.0}, Vec{1.0}};
  if (N == 2) {
    for (int j = 0; j < spec.seeds_2d; ++j) out.push_back(from_angle(2 * kPi * j / spec.seeds_2d));
    return out;
  }
  const int n = spec.seeds_3d;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back(Vec{r * std::cos(ga * i), r * std::sin(ga * i), z});
  }
  return out;
}

template <class V>
Extremum<V> sphere_max_t(const DirFnT<V>& obj, int N, const OptSpec& spec) {
  spec.validate();
  const auto seeds = sphere_seeds(N, spec);
  std::vector<V> vals;
  vals.reserve(seeds.size());
  for (const auto& y : seeds) vals.push_back(obj(y));
  return maximize(obj, N, spec, seeds, vals);
}

template <class V>
Extremum<V> sphere_min_t(const DirFnT<V>& obj, int N, const OptSpec& spec) {
  return negate(sphere_max_t<V>(negated_fn(obj), N, spec));
}

template <class V>
std::pair<Extremum<V>, Extremum<V>> sphere_extrema_t(const DirFnT<V>& obj, int N, const OptSpec& spec) {
  spec.validate();
  const auto seeds = sphere_seeds(N, spec);
  std::vector<V> vals, neg;
  for (const auto& y : seeds) {
    vals.push_back(obj(y));
    neg.push_back(Traits<V>::neg(vals.back()));
  }
  auto mx = maximize(obj, N, spec, seeds, vals);
  auto mn = negate(maximize(negated_fn(obj), N, spec, seeds, neg));
  return {mx, mn};
}

template <class V>
std::pair<Extremum<V>, Extremum<V>> supinf_pair_t(const PairFnT<V>& obj, int N, const OptSpec& spec) {
  auto inner = [&](const Vec& y) { return sphere_min_t<V>([&](const Vec& z) { return obj(y, z); }, N, spec); };
  const auto outer = sphere_max_t<V>([&](const Vec& y) { return inner(y).value; }, N, spec);
  return {outer, inner(outer.argopt)};
}

template <class V>
V infsup_value_t(const PairFnT<V>& obj, int N, const OptSpec& spec) {
  auto inner = [&](const Vec& z) { return sphere_max_t<V>([&](const Vec& y) { return obj(y, z); }, N, spec).value; };
  return sphere_min_t<V>(inner, N, spec).value;
}

template Extremum<double> sphere_max_t(const DirFnT<double>&, int, const OptSpec&);
template Extremum<double> sphere_min_t(const DirFnT<double>&, int, const OptSpec&);
template std::pair<Extremum<double>, Extremum<double>> sphere_extrema_t(const DirFnT<double>&, int, const OptSpec&);
template std::pair<Extremum<double>, Extremum<double>> supinf_pair_t(const PairFnT<double>&, int, const OptSpec&);
template double infsup_value_t(const PairFnT<double>&, int, const OptSpec&);
template Extremum<DivergentValue> sphere_max_t(const DirFnT<DivergentValue>&, int, const OptSpec&);
template Extremum<DivergentValue> sphere_min_t(const DirFnT<DivergentValue>&, int, const OptSpec&);
template std::pair<Extremum<DivergentValue>, Extremum<DivergentValue>> sphere_extrema_t(
    const DirFnT<DivergentValue>&, int, const OptSpec&);
template std::pair<Extremum<DivergentValue>, Extremum<DivergentValue>> supinf_pair_t(
    const PairFnT<DivergentValue>&, int, const OptSpec&);
template DivergentValue infsup_value_t(const PairFnT<DivergentValue>&, int, const OptSpec&);

namespace {

// Compass search in the ball, maximizing sign * f; moves leaving the ball are
// projected back onto its boundary.
std::pair<Vec, double> ball_compass(const DirFn& f, const Vec& x, double eps, Vec y, double val, double sign,
                                    const OptSpec& sp, double* step_out) {
  double step = eps / sp.ball_shells;
  int contractions = 0;
  while (contractions < sp.max_iterations) {
    bool moved = false;
    Vec best_y = y;
    double best_v = val;
    for (int d = 0; d < x.n; ++d)
      for (double sg : {1.0, -1.0}) {
        Vec z = y;
        z[d] += sg * step;
        const Vec off = z - x;
        const double len = norm(off);
        if (len > eps) z = x + (eps / len) * off;
        const double v = sign * f(z);
        if (v > best_v) best_v = v, best_y = z, moved = true;
      }
    if (moved) {
      y = best_y;
      val = best_v;
    } else {
      step *= sp.contraction;
      ++contractions;
    }
  }
  *step_out = step;
  return {y, val};
}

}  // namespace

BallExtrema ball_extrema(const DirFn& f, const Vec& x, double eps, const OptSpec& spec, const std::vector<Vec>& warm) {
  spec.validate();
  if (!(eps > 0)) throw DomainError("ball radius must be positive");
  check_dim(x.n);
  const int N = x.n;
  const auto seeds = sphere_seeds(N, spec);

  struct Sample {
    Vec z;
    double v;
  };
  std::vector<Sample> samples{{x, f(x)}};
  for (int k = 1; k <= spec.ball_shells; ++k)
    for (const auto& w : seeds) {
      const Vec z = x + (eps * k / spec.ball_shells) * w;
      samples.push_back({z, f(z)});
    }
  for (const auto& w : warm) {
    const Vec z = x + eps * normalized(w);
    samples.push_back({z, f(z)});
  }

  BallExtrema out;
  const auto boundary = sphere_extrema([&](const Vec& w) { return f(x + eps * w); }, N, spec);
  out.sup = boundary.first.value;
  out.argsup = x + eps * boundary.first.argopt;
  out.inf = boundary.second.value;
  out.arginf = x + eps * boundary.second.argopt;
  out.achieved_tol = eps * std::max(boundary.first.achieved_tol, boundary.second.achieved_tol);

  for (double sign : {1.0, -1.0}) {
    std::vector<int> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return sign * samples[a].v > sign * samples[b].v; });
    const int m = std::min<int>(spec.refine_candidates, static_cast<int>(idx.size()));
    for (int i = 0; i < m; ++i) {
      double step = 0;
      const auto [z, v] = ball_compass(f, x, eps, samples[idx[i]].z, sign * samples[idx[i]].v, sign, spec, &step);
      if (sign > 0 && v > out.sup) out.sup = v, out.argsup = z;
      if (sign < 0 && -v < out.inf) out.inf = -v, out.arginf = z;
    }
  }
  return out;
}

}  // namespace fraclap
