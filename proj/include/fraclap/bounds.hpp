#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/testfuncs.hpp"
#include "json.hpp"

namespace fraclap {

/// A_eps is defined only off critical points.
class BranchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Everything the error bounds read about phi near x.
struct BoundInputs {
  double s = 0.75;
  double eps = 0.1;
  double eta = 1.0;
  double c_x = 0.0;
  double grad_norm = 0.0;
  double sup_norm = 0.0;
  std::function<double(double)> modulus;
  std::optional<double> lipschitz;
  std::optional<double> holder_seminorm;
  double holder_alpha = 1.0;
  std::optional<double> hessian_norm;  // |D^2 phi(x)|
  std::optional<double> hessian_osc;   // sup over B_eps(x) of |D^2 phi(y) - D^2 phi(x)|
  double gradient_zero_tol = 1e-10;

  bool critical() const { return grad_norm <= gradient_zero_tol; }
  double omega(double a) const;
};

/// Reads the metadata of phi at x. Hessian data are filled when available.
BoundInputs bound_inputs(const TestFunction& phi, const Vec& x, double s, double eps, bool with_hessian = true);

/// A bound as a sum of named nonnegative terms.
struct BoundBreakdown {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  double total() const;
};
nlohmann::ordered_json to_json(const BoundBreakdown& b);

double kappa_eps(const BoundInputs& in);
/// The first quotient of A_eps alone.
double a_eps_quotient(const BoundInputs& in);
double a_eps(const BoundInputs& in);

/// |A^o phi - phi - eps^{2s} L / (c_s (1-s))|.
BoundBreakdown thm1_terms(const BoundInputs& in);
double thm1_bound(const BoundInputs& in);
/// |A phi - phi - eps^{2s} L / c_s| for the mixed average.
BoundBreakdown thm2_terms(const BoundInputs& in);
double thm2_bound(const BoundInputs& in);
/// |L^eps - L| off critical points.
BoundBreakdown cor32_terms(const BoundInputs& in);
double cor32_bound(const BoundInputs& in);
/// |L^eps - L| at critical points: c_s s C_x eps^{2-2s}.
double due5_bound(const BoundInputs& in);
/// The matching |L^eps - L| bound for either branch.
double lap_eps_gap_bound(const BoundInputs& in);
/// Local part of the mixed expansion, compared against int_0^eps along p/|p|.
double prop41_bound(const BoundInputs& in);
/// |sup_B + inf_B - 2 phi(x) - eps^2 Delta_inf phi(x)| over B_eps(x).
double midpoint_local_bound(const BoundInputs& in);

/// sup over axes of |prism average - line average|.
BoundBreakdown lemma51_terms(const BoundInputs& in, double R, double alpha);
double lemma51_bound(const BoundInputs& in, double R, double alpha);

struct PrismSchedule {
  double R = 0.0;
  double alpha = 0.0;
};
/// R = eps^{1/(2s)-1}, alpha = eps^{4s-1/(2s)}.
PrismSchedule cor52_schedule(double eps, double s);
/// |prism midpoint - phi - eps^{2s} L / (c_s (1-s))| under the schedule.
BoundBreakdown cor52_terms(const BoundInputs& in);
double cor52_bound(const BoundInputs& in);

/// Closed-form order estimates for Lipschitz, Holder and bounded phi.
double kappa_bound_bounded(const BoundInputs& in);
double kappa_bound_holder(const BoundInputs& in);
double kappa_bound_lipschitz(const BoundInputs& in);
double a_eps_bound_lipschitz(const BoundInputs& in);
/// Limit of the mixed bound as s -> 1: 2 eps^3 |H|^2/|p| + eps^2 osc.
double thm2_limit_expression(const BoundInputs& in);

/// Residual orders the bounds predict as eps -> 0.
double thm1_order(double s);           // Lipschitz phi: min(4s-1, 2)
double thm2_order(double s);           // C^{2,1} phi: min(4s-1, 3)
double thm1_order_holder(double s, double alpha);

}  // namespace fraclap
