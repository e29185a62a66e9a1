#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace fraclap {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gamma function via the Lanczos approximation (g = 7, 9 terms).
double gamma_fn(double x);

/// C_s = 4^s s Gamma(1/2+s) / (sqrt(pi) Gamma(1-s)).
double frac_constant_1d(double s);
/// C(N,s) = 4^s s Gamma(N/2+s) / (pi^{N/2} Gamma(1-s)).
double frac_constant_nd(int N, double s);
/// C_s from (2 * int_0^inf (1 - cos t) t^{-1-2s} dt)^{-1}; independent of the Gamma path.
double frac_constant_1d_by_integral(double s);

/// Order s in (1/2,1) and ambient dimension with the derived constants.
class FracParams {
 public:
  explicit FracParams(double s, int dim = 1);

  double s() const { return s_; }
  int dim() const { return dim_; }
  /// C_s, normalizing constant of the 1-D measure.
  double big_c() const { return big_c_; }
  /// c_s with C_s = s(1-s) c_s.
  double small_c() const { return small_c_; }
  /// C(N,s) for the stored dimension.
  double big_c_nd() const { return big_c_nd_; }

 private:
  double s_;
  int dim_;
  double small_c_;
  double big_c_;
  double big_c_nd_;
};

void check_order(double s);

/// mu_s(a,b) = C_s (a^{-2s} - b^{-2s}) / (2s); b may be infinite.
double mu_mass(double s, double a, double b = kInf);
/// int_a^b t^k dmu_s(t) for k in {1,2}.
double mu_moment(double s, int k, double a, double b);

struct QuadSpec {
  double inner_cut = 1.0;
  double truncation_radius = 64.0;
  int panels_per_decade = 4;
  int nodes_per_panel = 16;
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  /// Geometric half-panels toward a zero lower limit before extrapolating the rest.
  int origin_levels = 8;
  /// Total integrand evaluations allowed per integral.
  long max_evaluations = 4'000'000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

/// Divergent integral split as rate * int_0^cut t dmu + finite part.
struct FinitePart {
  double rate = 0.0;    // leading coefficient b of f(t) ~ b t
  double finite = 0.0;  // int_0^inf (f - b t 1{t < cut}) dmu_s
  double error = 0.0;
  long evaluations = 0;
};

using LineFn = std::function<double(double)>;

/// int_lower^inf f dmu_s. For lower = 0 the integrand must be O(t^2) at 0.
QuadResult quad_mu_line(const LineFn& f, double s, double lower, const QuadSpec& spec = {});
/// int_a^b f dmu_s on a finite interval, a > 0.
QuadResult quad_mu_interval(const LineFn& f, double s, double a, double b, const QuadSpec& spec = {});
/// For f(t) = b t + O(t^2): the rate b and the Hadamard finite part.
FinitePart quad_mu_line_finite_part(const LineFn& f, double s, const QuadSpec& spec = {});

struct GaussRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};
/// Gauss-Legendre rule, cached per order.
const GaussRule& gauss_legendre(int n);

}  // namespace fraclap
