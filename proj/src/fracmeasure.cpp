#include "fraclap/fracmeasure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double gamma_fn(double x) {
  if (x < 0.5) {
    // Reflection keeps the series in its accurate half-plane.
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

void check_order(double s) {
  if (!(s > 0.5 && s < 1.0)) throw DomainError("fractional order s must lie in (1/2, 1), got " + fmt_double(s));
}

double frac_constant_nd(int N, double s) {
  check_order(s);
  if (N < 1) throw DomainError("dimension must be positive");
  const double half_n = 0.5 * N;
  return s * std::pow(4.0, s) * gamma_fn(half_n + s) / (std::pow(kPi, half_n) * gamma_fn(1.0 - s));
}

double frac_constant_1d(double s) { return frac_constant_nd(1, s); }

double frac_constant_1d_by_integral(double s) {
  check_order(s);
  // [0,1]: termwise integration of the cosine series.
  double head = 0.0, fact = 1.0;
  for (int k = 1; k < 40; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = 1.0 / (fact * (2.0 * k - 2.0 * s));
    head += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  // [1,inf): 1/(2s) minus the cosine tail. Rotating t = 1 + iu turns
  // int_1^inf e^{it} t^{-p} dt into i e^{i} int_0^inf e^{-u} (1+iu)^{-p} du.
  const double p = 1.0 + 2.0 * s;
  const GaussRule& g = gauss_legendre(24);
  std::complex<double> acc = 0.0;
  const double width = 1.0, upper = 60.0;
  for (double a = 0.0; a < upper; a += width) {
    const double mid = a + 0.5 * width, half = 0.5 * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double u = mid + half * g.x[i];
      acc += g.w[i] * half * std::exp(-u) * std::pow(std::complex<double>(1.0, u), -p);
    }
  }
  const std::complex<double> rot = std::complex<double>(0.0, 1.0) * std::exp(std::complex<double>(0.0, 1.0)) * acc;
  const double tail = 1.0 / (2.0 * s) - rot.real();
  return 1.0 / (2.0 * (head + tail));
}

FracParams::FracParams(double s, int dim) : s_(s), dim_(dim) {
  check_order(s);
  if (dim < 1) throw DomainError("dimension must be positive");
  big_c_ = frac_constant_1d(s);
  small_c_ = big_c_ / (s * (1.0 - s));
  big_c_nd_ = frac_constant_nd(dim, s);
}

double mu_mass(double s, double a, double b) {
  check_order(s);
  if (!(a > 0.0)) {
    if (a == 0.0) throw DivergenceError("mu_s(0, b) is infinite");
    throw DomainError("mu_mass needs a > 0");
  }
  if (!(a < b)) throw DomainError("mu_mass needs a < b");
  const double tb = std::isinf(b) ? 0.0 : std::pow(b, -2.0 * s);
  return frac_constant_1d(s) * (std::pow(a, -2.0 * s) - tb) / (2.0 * s);
}

double mu_moment(double s, int k, double a, double b) {
  check_order(s);
  if (k != 1 && k != 2) throw DomainError("mu_moment supports k in {1,2}");
  if (std::isinf(b)) throw DivergenceError("moment diverges at infinity");
  if (a < 0.0 || (k == 1 && a == 0.0)) {
    if (k == 1 && a == 0.0) throw DivergenceError("first moment diverges at 0");
    throw DomainError("mu_moment needs a >= 0");
  }
  if (b < a) throw DomainError("mu_moment needs a <= b");
  if (a == b) return 0.0;
  const double cs = frac_constant_1d(s);
  if (k == 2) return cs * (std::pow(b, 2.0 - 2.0 * s) - std::pow(a, 2.0 - 2.0 * s)) / (2.0 - 2.0 * s);
  return cs * (std::pow(a, 1.0 - 2.0 * s) - std::pow(b, 1.0 - 2.0 * s)) / (2.0 * s - 1.0);
}

void QuadSpec::validate() const {
  if (!(inner_cut > 0.0)) throw DomainError("inner_cut must be positive");
  if (!(truncation_radius > 0.0)) throw DomainError("truncation_radius must be positive");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (nodes_per_panel < 4) throw DomainError("nodes_per_panel must be >= 4");
  if (panels_per_decade < 2) throw DomainError("panels_per_decade must be >= 2");
  if (origin_levels < 7) throw DomainError("origin_levels must be >= 7");
  if (max_evaluations < 1000) throw DomainError("max_evaluations too small");
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules

namespace {

GaussRule compute_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0L);
      const long double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-19L) break;
    }
    {
      long double p0 = 1.0L, p1 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0L);
    }
    const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
    r.x[i] = static_cast<double>(-z);
    r.x[n - 1 - i] = static_cast<double>(z);
    r.w[i] = r.w[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<GaussRule>(compute_gauss(n))).first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// Adaptive panels

namespace {

struct BudgetExceeded {};

template <int K>
using Vals = std::array<double, K>;

template <int K>
struct PanelVal {
  Vals<K> q{};
  Vals<K> l1{};
};

template <int K>
struct Accum {
  Vals<K> sum{};
  Vals<K> err{};
  Vals<K> l1{};
};

template <int K, class G>
class Adaptive {
 public:
  Adaptive(const G& g, const GaussRule& rule, const QuadSpec& spec, long& evals)
      : g_(g), rule_(rule), spec_(spec), evals_(evals) {}

  PanelVal<K> panel(double a, double b) {
    PanelVal<K> out;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const std::size_t n = rule_.x.size();
    evals_ += static_cast<long>(n);
    if (evals_ > spec_.max_evaluations) throw BudgetExceeded{};
    for (std::size_t i = 0; i < n; ++i) {
      const Vals<K> v = g_(mid + half * rule_.x[i]);
      const double wt = rule_.w[i] * half;
      for (int k = 0; k < K; ++k) {
        lo_[k] = std::min(lo_[k], v[k]);
        hi_[k] = std::max(hi_[k], v[k]);
        out.q[k] += wt * v[k];
        out.l1[k] += wt * std::abs(v[k]);
      }
    }
    return out;
  }

  void integrate(double a, double b, Accum<K>& acc) {
    if (!(b > a)) return;
    lo_.fill(kInf);
    hi_.fill(-kInf);
    refine(a, b, panel(a, b), 0, acc);
  }

  /// Spread of sampled integrand values during the last integrate call.
  double range(int k) const { return hi_[k] - lo_[k]; }

 private:
  void refine(double a, double b, const PanelVal<K>& whole, int depth, Accum<K>& acc) {
    const double m = 0.5 * (a + b);
    const PanelVal<K> left = panel(a, m), right = panel(m, b);
    bool ok = true;
    Vals<K> diff{};
    for (int k = 0; k < K; ++k) {
      diff[k] = std::abs(left.q[k] + right.q[k] - whole.q[k]);
      const double tol = std::max(spec_.abs_tol, spec_.rel_tol * (left.l1[k] + right.l1[k]));
      if (diff[k] > tol) ok = false;
    }
    if (ok || depth >= 48 || m <= a || m >= b) {
      for (int k = 0; k < K; ++k) {
        acc.sum[k] += left.q[k] + right.q[k];
        acc.err[k] += diff[k];
        acc.l1[k] += left.l1[k] + right.l1[k];
      }
      return;
    }
    refine(a, m, left, depth + 1, acc);
    refine(m, b, right, depth + 1, acc);
  }

  const G& g_;
  const GaussRule& rule_;
  const QuadSpec& spec_;
  long& evals_;
  Vals<K> lo_{}, hi_{};
};

// Solves the small dense system A x = y in place (partial pivoting).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> y) {
  const int n = static_cast<int>(y.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(y[c], y[piv]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      y[r] -= f * y[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double v = y[r];
    for (int k = r + 1; k < n; ++k) v -= a[r][k] * x[k];
    x[r] = v / a[r][r];
  }
  return x;
}

// Fits panel integrals P_{k0+j} = sum_m A_m r_m^j over the supplied exponents.
std::vector<double> fit_geometric(const std::vector<double>& panels, const std::vector<double>& ratios) {
  const int J = static_cast<int>(ratios.size());
  const int k0 = static_cast<int>(panels.size()) - J;
  std::vector<std::vector<double>> a(J, std::vector<double>(J));
  std::vector<double> y(J);
  for (int j = 0; j < J; ++j) {
    for (int m = 0; m < J; ++m) a[j][m] = std::pow(ratios[m], j);
    y[j] = panels[k0 + j];
  }
  return solve_dense(a, y);
}

// Sum over j >= first of sum_m coef_m ratio_m^j.
double geometric_remainder(const std::vector<double>& coef, const std::vector<double>& ratios, int first) {
  double r = 0.0;
  for (std::size_t m = 0; m < ratios.size(); ++m)
    r += coef[m] * std::pow(ratios[m], first) / (1.0 - ratios[m]);
  return r;
}

double smooth_psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// C-infinity step from 0 (x <= 0) to 1 (x >= 1).
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = smooth_psi(x), b = smooth_psi(1.0 - x);
  return a / (a + b);
}

double smooth_step_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = smooth_psi(x), b = smooth_psi(1.0 - x);
  const double d = a + b;
  return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / (d * d);
}

enum class Origin { none, regular, finite_part };

struct LineOutcome {
  double value = 0.0;
  double error = 0.0;
  double rate = 0.0;
  double l1 = 0.0;
  long evals = 0;
};

class LineIntegrator {
 public:
  LineIntegrator(const LineFn& f, double s, const QuadSpec& spec)
      : f_(f), s_(s), cs_(frac_constant_1d(s)), spec_(spec),
        rule_(gauss_legendre(spec.nodes_per_panel)) {}

  LineOutcome run(double lower, double upper, Origin origin) {
    LineOutcome out;
    try {
      const double cut = spec_.inner_cut;
      double start = lower;
      if (origin != Origin::none) {
        origin_part(cut, origin);
        start = cut;
      } else if (lower < cut) {
        const double gend = std::min(cut, upper);
        for (double a = lower; a < gend; a *= 2.0) weighted(a, std::min(2.0 * a, gend));
        start = gend;
      }
      const double trunc = std::isinf(upper) ? std::max(spec_.truncation_radius, start) : upper;
      if (trunc > start) {
        const int n = std::max(1, static_cast<int>(std::ceil(spec_.panels_per_decade * std::log10(trunc / start) - 1e-12)));
        const double ratio = std::pow(trunc / start, 1.0 / n);
        double a = start;
        for (int i = 0; i < n; ++i) {
          const double b = (i == n - 1) ? trunc : a * ratio;
          weighted(a, b);
          a = b;
        }
      }
      if (std::isinf(upper)) tail(trunc);
    } catch (const BudgetExceeded&) {
      throw ConvergenceError("singular quadrature exceeded its evaluation budget", sum_, err_ + std::abs(sum_));
    }
    out.value = sum_;
    out.error = err_;
    out.rate = rate_;
    out.l1 = l1_;
    out.evals = evals_;
    return out;
  }

 private:
  double weight(double t) const { return cs_ * std::pow(t, -1.0 - 2.0 * s_); }

  Accum<1> integrate_weighted(double a, double b) {
    auto g = [this](double t) { return Vals<1>{f_(t) * weight(t)}; };
    Adaptive<1, decltype(g)> ad(g, rule_, spec_, evals_);
    Accum<1> acc;
    ad.integrate(a, b, acc);
    return acc;
  }

  void weighted(double a, double b) {
    const Accum<1> acc = integrate_weighted(a, b);
    sum_ += acc.sum[0];
    err_ += acc.err[0];
    l1_ += acc.l1[0];
  }

  // Half-panels toward 0 plus an extrapolated geometric remainder. On panel k
  // the monomial t^m contributes a multiple of 2^{-k(m-2s)}.
  void origin_part(double cut, Origin origin) {
    // A linear term leaves a large odd Taylor tail; fit deeper and with one more power.
    const int levels = spec_.origin_levels + (origin == Origin::finite_part ? 2 : 0);
    const int top = (origin == Origin::finite_part) ? 7 : 6;
    std::vector<double> panels(levels);
    for (int k = 0; k < levels; ++k) {
      const double b = cut * std::ldexp(1.0, -k), a = 0.5 * b;
      const Accum<1> acc = integrate_weighted(a, b);
      panels[k] = acc.sum[0];
      err_ += acc.err[0];
      l1_ += acc.l1[0];
    }
    const int lo = (origin == Origin::finite_part) ? 1 : 2;
    std::vector<double> ratios, coarse;
    for (int m = lo; m <= top; ++m) ratios.push_back(std::pow(2.0, -(m - 2.0 * s_)));
    coarse.assign(ratios.begin(), ratios.end() - 1);
    const std::vector<double> coef = fit_geometric(panels, ratios);
    const std::vector<double> coef_c = fit_geometric(panels, coarse);
    double head = 0.0;
    for (double p : panels) head += p;
    const int J = static_cast<int>(ratios.size());
    const int k0 = levels - J;
    if (origin == Origin::finite_part) {
      const double m1 = mu_moment(s_, 1, cut * std::ldexp(1.0, -k0 - 1), cut * std::ldexp(1.0, -k0));
      rate_ = coef[0] / m1;
      const double m1c = mu_moment(s_, 1, cut * std::ldexp(1.0, -k0 - 2), cut * std::ldexp(1.0, -k0 - 1));
      const double rate_c = coef_c[0] / m1c;
      const double linear = mu_moment(s_, 1, cut * std::ldexp(1.0, -levels), cut);
      std::vector<double> rr(ratios.begin() + 1, ratios.end()), cc(coef.begin() + 1, coef.end());
      std::vector<double> rrc(coarse.begin() + 1, coarse.end()), ccc(coef_c.begin() + 1, coef_c.end());
      const double rem = geometric_remainder(cc, rr, J);
      const double rem_c = geometric_remainder(ccc, rrc, J - 1);
      sum_ += head - rate_ * linear + rem;
      err_ += std::abs(rem - rem_c) + std::abs(rate_ - rate_c) * linear;
    } else {
      const double rem = geometric_remainder(coef, ratios, J);
      const double rem_c = geometric_remainder(coef_c, coarse, J - 1);
      sum_ += head + rem;
      err_ += std::abs(rem - rem_c);
    }
  }

  double tolerance() const { return std::max(spec_.abs_tol, spec_.rel_tol * l1_); }

  void tail(double trunc) {
    const double saved_sum = sum_, saved_err = err_, saved_l1 = l1_;
    const long saved_evals = evals_;
    if (u_tail(trunc)) return;
    sum_ = saved_sum;
    err_ = saved_err;
    l1_ = saved_l1;
    evals_ = saved_evals;
    windowed_tail(trunc);
  }

  // With u = t^{-2s}, dmu_s = C_s/(2s) du on (0, trunc^{-2s}).
  bool u_tail(double trunc) {
    const double scale = cs_ / (2.0 * s_);
    const double inv = -1.0 / (2.0 * s_);
    auto g = [&](double u) { return Vals<1>{scale * f_(std::pow(u, inv))}; };
    QuadSpec local = spec_;
    local.max_evaluations = evals_ + 6000;
    Adaptive<1, decltype(g)> ad(g, rule_, local, evals_);
    double top = std::pow(trunc, -2.0 * s_);
    double prev = 0.0;
    try {
      for (int j = 0; j < 160; ++j) {
        Accum<1> acc;
        ad.integrate(0.5 * top, top, acc);
        sum_ += acc.sum[0];
        err_ += acc.err[0];
        l1_ += acc.l1[0];
        const double p = acc.sum[0];
        // Once the integrand is nearly constant on a panel, the untouched part
        // (0, top/2) holds about the same integral as the panel itself.
        const double spread = ad.range(0) * 0.5 * top;
        const double drift = std::abs(p - 0.5 * prev);
        if (j >= 4 && spread <= tolerance() && drift <= tolerance()) {
          sum_ += p;
          err_ += drift + spread;
          return true;
        }
        if (j >= 4 && acc.l1[0] <= 0.1 * tolerance()) {
          err_ += acc.l1[0];
          return true;
        }
        prev = p;
        top *= 0.5;
      }
    } catch (const BudgetExceeded&) {
      if (evals_ > spec_.max_evaluations) throw;
    }
    return false;
  }

  // Oscillatory tails: integrate to T against a smooth cutoff on [T,2T] and
  // replace the remainder by a smoothly windowed mean of f; double T until stable.
  void windowed_tail(double trunc) {
    double T = trunc;
    double reg = sum_;
    double prev_est = 0.0, prev_diff = kInf;
    for (int k = 0; k < 40; ++k) {
      auto g = [&](double t) {
        const double ft = f_(t), w = weight(t), tau = (t - T) / T;
        const double chi = 1.0 - smooth_step(tau);
        return Vals<4>{ft * w, ft * w * chi, ft * smooth_step_deriv(tau) / T, w * (1.0 - chi)};
      };
      Adaptive<4, decltype(g)> ad(g, rule_, spec_, evals_);
      Accum<4> acc;
      const int pieces = 8;
      for (int i = 0; i < pieces; ++i) ad.integrate(T + T * i / pieces, T + T * (i + 1) / pieces, acc);
      const double mean = acc.sum[2];
      const double est = reg + acc.sum[1] + mean * (acc.sum[3] + mu_mass(s_, 2.0 * T, kInf));
      l1_ += acc.l1[0];
      err_ += acc.err[0];
      const double diff = std::abs(est - prev_est);
      if (k >= 2 && diff <= 0.1 * tolerance() && prev_diff <= tolerance()) {
        sum_ = est;
        err_ += prev_diff;
        return;
      }
      prev_diff = (k >= 1) ? diff : kInf;
      prev_est = est;
      reg += acc.sum[0];
      T *= 2.0;
    }
    throw ConvergenceError("oscillatory tail did not settle", prev_est, prev_diff);
  }

  const LineFn& f_;
  double s_;
  double cs_;
  const QuadSpec& spec_;
  const GaussRule& rule_;
  double sum_ = 0.0, err_ = 0.0, l1_ = 0.0, rate_ = 0.0;
  long evals_ = 0;
};

}  // namespace

QuadResult quad_mu_line(const LineFn& f, double s, double lower, const QuadSpec& spec) {
  check_order(s);
  spec.validate();
  if (!(lower >= 0.0)) throw DomainError("quad_mu_line needs lower >= 0");
  LineIntegrator li(f, s, spec);
  const LineOutcome o = li.run(lower, kInf, lower == 0.0 ? Origin::regular : Origin::none);
  return {o.value, o.error, o.evals};
}

QuadResult quad_mu_interval(const LineFn& f, double s, double a, double b, const QuadSpec& spec) {
  check_order(s);
  spec.validate();
  if (!(a > 0.0) || !(b > a) || std::isinf(b)) throw DomainError("quad_mu_interval needs 0 < a < b < inf");
  LineIntegrator li(f, s, spec);
  const LineOutcome o = li.run(a, b, Origin::none);
  return {o.value, o.error, o.evals};
}

FinitePart quad_mu_line_finite_part(const LineFn& f, double s, const QuadSpec& spec) {
  check_order(s);
  spec.validate();
  LineIntegrator li(f, s, spec);
  const LineOutcome o = li.run(0.0, kInf, Origin::finite_part);
  return {o.rate, o.value, o.error, o.evals};
}

}  // namespace fraclap
