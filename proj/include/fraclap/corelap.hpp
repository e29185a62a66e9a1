#pragma once

#include <optional>

#include "fraclap/fracmeasure.hpp"
#include "fraclap/sphereopt.hpp"
#include "fraclap/testfuncs.hpp"

namespace fraclap {

struct CoreSpec {
  QuadSpec quad;
  OptSpec opt;
  /// Direction search used by the forced nested sup-inf at eps = 0. Each
  /// outer direction runs a full inner search, so the grids are coarser.
  OptSpec nested_opt = [] {
    OptSpec o;
    o.seeds_2d = 64;
    o.seeds_3d = 128;
    return o;
  }();
  /// |grad phi(x)| at or below this counts as a critical point.
  double gradient_zero_tol = 1e-10;
  /// Also compute inf-sup in the nested evaluation (diagnostic only).
  bool infsup_diagnostic = false;
};

enum class Branch { gradient_aligned, sup_inf };
const char* to_string(Branch b);

struct OperatorValue {
  double value = 0.0;
  Branch branch = Branch::sup_inf;
  double quad_error = 0.0;
  long evaluations = 0;
  double opt_tol = 0.0;
  Vec sup_direction;
  Vec inf_direction;
  std::optional<double> infsup;
};

/// phi(x+y) + phi(x-yt) - 2 phi(x).
double second_difference(const TestFunction& phi, const Vec& x, const Vec& y, const Vec& yt);

/// int_eps^inf phi(x + t y) dmu_s(t).
QuadResult line_integral(const TestFunction& phi, const Vec& x, const Vec& y, double s, double eps,
                         const QuadSpec& quad = {});
/// The same integral normalized by mu_s(eps, inf).
double line_average(const TestFunction& phi, const Vec& x, const Vec& y, double s, double eps,
                    const QuadSpec& quad = {});

/// Sub-results shared by the eps-operator and the first average. sup_shift and
/// inf_shift are the extremal values of int_eps^inf (phi(x+ty) - phi(x)) dmu_s.
struct EpsParts {
  double s = 0.0;
  double eps = 0.0;
  double phi_x = 0.0;
  double mass = 0.0;  // mu_s(eps, inf)
  double sup_shift = 0.0;
  double inf_shift = 0.0;
  Vec sup_direction;
  Vec inf_direction;
  double quad_error = 0.0;
  long evaluations = 0;
  double opt_tol = 0.0;

  double sup_integral() const { return sup_shift + phi_x * mass; }
  double inf_integral() const { return inf_shift + phi_x * mass; }
  /// sup + inf - (1-s) c_s eps^{-2s} phi(x).
  double lap_frac_eps() const { return sup_shift + inf_shift; }
  /// Midpoint of the extremal normalized line averages.
  double average_o() const { return phi_x + 0.5 * (sup_shift + inf_shift) / mass; }
};

EpsParts eps_parts(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec = {});
OperatorValue lap_frac_eps(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec = {});

/// The eps = 0 operator: one integral along the gradient when it is nonzero,
/// otherwise sup + inf of the one-sided integrals (the sup-inf separates there).
OperatorValue lap_frac(const TestFunction& phi, const Vec& x, double s, const CoreSpec& spec = {});
/// Nested sup_y inf_z of int_0^inf L_phi(x, ty, tz) dmu_s. Off critical points
/// the integrals diverge unless z = y is the gradient direction, so values are
/// compared as (divergence rate, finite part).
OperatorValue lap_frac_nested(const TestFunction& phi, const Vec& x, double s, const CoreSpec& spec = {});
/// Normalized operator value L / C_s.
double delta_inf_s(double lap_frac_value, double s);

double average_o(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec = {});

struct MidpointParts {
  double sup = 0.0;
  double inf = 0.0;
  double value() const { return 0.5 * (sup + inf); }
};
MidpointParts midpoint_parts(const TestFunction& phi, const Vec& x, double eps, const OptSpec& opt = {});
double midpoint_local(const TestFunction& phi, const Vec& x, double eps, const OptSpec& opt = {});

struct MixedParts {
  double s = 0.0;
  double average_o = 0.0;
  double midpoint = 0.0;
  double value() const { return (1.0 - s) * average_o + s * midpoint; }
};
MixedParts mixed_parts(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec = {});
double average_mixed(const TestFunction& phi, const Vec& x, double s, double eps, const CoreSpec& spec = {});

/// <Hessian p/|p|, p/|p|> with p the gradient at x.
double lap_inf_local(const TestFunction& phi, const Vec& x, double gradient_zero_tol = 1e-10);
/// Volume average of phi over B(x, eps) by a product rule.
double ball_mean_local(const TestFunction& phi, const Vec& x, double eps);

}  // namespace fraclap
