#include "fraclap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclap/fracmeasure.hpp"

namespace fraclap {

namespace {

void check_regime(const BoundInputs& in) {
  check_order(in.s);
  if (!(in.eps > 0)) throw DomainError("eps must be positive");
  if (!(in.eps < in.eta)) {
    std::ostringstream msg;
    msg << "bounds need eps < eta_x (eps=" << in.eps << ", eta_x=" << in.eta << ")";
    throw OutOfRegime(msg.str());
  }
}

void require_gradient(const BoundInputs& in) {
  if (in.critical()) throw BranchError("A_eps is defined only where the gradient is nonzero");
}

double small_c(double s) { return frac_constant_1d(s) / (s * (1 - s)); }

// (2s/C_s) int_eta^inf (1+t) dmu_s.
double far_weight(double s, double eta) {
  return std::pow(eta, -2 * s) + 2 * s / (2 * s - 1) * std::pow(eta, 1 - 2 * s);
}

double sum_eta(double s, double eta) { return std::pow(eta, -2 * s) + std::pow(eta, 1 - 2 * s); }

}  // namespace

double BoundInputs::omega(double a) const {
  if (modulus) return modulus(a);
  if (lipschitz) return std::min(*lipschitz * a, 2 * sup_norm);
  if (holder_seminorm) return *holder_seminorm * std::pow(a, holder_alpha);
  return 2 * sup_norm;
}

BoundInputs bound_inputs(const TestFunction& phi, const Vec& x, double s, double eps, bool with_hessian) {
  if (!phi.eta || !phi.c_bound) throw PreconditionError("entry '" + phi.name + "' carries no eta_x / C_x data");
  if (!phi.has_gradient()) throw PreconditionError("entry '" + phi.name + "' has no gradient");
  BoundInputs in;
  in.s = s;
  in.eps = eps;
  in.eta = phi.eta(x);
  in.c_x = phi.c_bound(x);
  in.grad_norm = norm(phi.gradient(x));
  in.sup_norm = phi.sup_norm;
  in.modulus = [phi](double a) { return modulus_of(phi, a); };
  in.lipschitz = phi.lipschitz;
  in.holder_seminorm = phi.holder_seminorm;
  in.holder_alpha = phi.holder_alpha;
  if (with_hessian && phi.has_hessian()) {
    in.hessian_norm = spectral_norm(phi.hessian(x));
    in.hessian_osc = hessian_oscillation(phi, x, eps);
  }
  return in;
}

double BoundBreakdown::total() const {
  double t = 0.0;
  for (const auto& [k, v] : terms) t += v;
  return t;
}

nlohmann::ordered_json to_json(const BoundBreakdown& b) {
  nlohmann::ordered_json j;
  j["bound"] = b.name;
  j["terms"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : b.terms) j["terms"][k] = v;
  j["total"] = b.total();
  return j;
}

double kappa_eps(const BoundInputs& in) {
  check_regime(in);
  require_gradient(in);
  const double s = in.s, eta = in.eta;
  const double K = 8.0 / in.grad_norm * ((2 * s - 1) / (2 * s) * std::pow(eta, -2 * s) + std::pow(eta, 1 - 2 * s)) /
                   (std::pow(in.eps, 1 - 2 * s) - std::pow(eta, 1 - 2 * s));
  auto feasible = [&](double a) { return a * a <= K * in.omega(a); };
  // The feasible set need not be an interval for odd moduli, so scan first.
  constexpr int n = 2048;
  int last = 0;
  for (int i = 0; i < n; ++i)
    if (feasible(2.0 * i / (n - 1))) last = i;
  if (last == n - 1) return 2.0;
  double lo = 2.0 * last / (n - 1), hi = 2.0 * (last + 1) / (n - 1);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double a_eps_quotient(const BoundInputs& in) {
  check_regime(in);
  require_gradient(in);
  const double s = in.s, eta = in.eta, eps = in.eps;
  return 16 * in.c_x / in.grad_norm * (2 * s - 1) / (1 - s) * (std::pow(eta, 2 - 2 * s) - std::pow(eps, 2 - 2 * s)) /
         (std::pow(eps, 1 - 2 * s) - std::pow(eta, 1 - 2 * s));
}

double a_eps(const BoundInputs& in) { return std::max(a_eps_quotient(in), kappa_eps(in)); }

BoundBreakdown thm1_terms(const BoundInputs& in) {
  check_regime(in);
  const double s = in.s, eps = in.eps, eta = in.eta;
  BoundBreakdown b{"expansion_o", {{"local", s / (1 - s) * in.c_x * eps * eps}}};
  if (!in.critical()) {
    const double A = a_eps(in), e2s = std::pow(eps, 2 * s);
    b.terms.push_back(
        {"direction", e2s * 4 * s * in.c_x * (std::pow(eta, 2 - 2 * s) - std::pow(eps, 2 - 2 * s)) / (1 - s) * A});
    b.terms.push_back({"far_field", e2s * far_weight(s, eta) * in.omega(A)});
  }
  return b;
}

double thm1_bound(const BoundInputs& in) { return thm1_terms(in).total(); }

BoundBreakdown thm2_terms(const BoundInputs& in) {
  check_regime(in);
  if (in.critical()) throw BranchError("the mixed expansion bound needs a nonzero gradient");
  if (!in.hessian_norm || !in.hessian_osc) throw PreconditionError("the mixed expansion bound needs Hessian data");
  const double s = in.s, eps = in.eps, eta = in.eta, H = *in.hessian_norm, p = in.grad_norm;
  if (eps * H > p) {
    std::ostringstream msg;
    msg << "mixed expansion bound needs eps |D^2 phi(x)| <= |p_x| (" << eps * H << " > " << p << ")";
    throw OutOfRegime(msg.str());
  }
  const double A = a_eps(in), e2s = std::pow(eps, 2 * s);
  return {"expansion_mixed",
          {{"direction", 2 * e2s * 2 * s * in.c_x * (std::pow(eta, 2 - 2 * s) - std::pow(eps, 2 - 2 * s)) * A},
           {"far_field",
            2 * e2s * (0.5 * std::pow(eta, -2 * s) + s * std::pow(eta, 1 - 2 * s) / (2 * s - 1)) * (1 - s) * in.omega(A)},
           {"curvature", 2 * s * eps * eps * eps * H * H / p},
           {"hessian_oscillation", s * eps * eps * *in.hessian_osc}}};
}

double thm2_bound(const BoundInputs& in) { return thm2_terms(in).total(); }

BoundBreakdown cor32_terms(const BoundInputs& in) {
  check_regime(in);
  require_gradient(in);
  const double s = in.s, eps = in.eps, eta = in.eta, cs = small_c(s), A = a_eps(in);
  return {"operator_gap",
          {{"direction", 4 * cs * s * in.c_x * (std::pow(eta, 2 - 2 * s) - std::pow(eps, 2 - 2 * s)) * A},
           {"far_field", cs * (1 - s) * far_weight(s, eta) * in.omega(A)},
           {"near_origin", cs * s * in.c_x * std::pow(eps, 2 - 2 * s)}}};
}

double cor32_bound(const BoundInputs& in) { return cor32_terms(in).total(); }

double due5_bound(const BoundInputs& in) {
  check_regime(in);
  return small_c(in.s) * in.s * in.c_x * std::pow(in.eps, 2 - 2 * in.s);
}

double lap_eps_gap_bound(const BoundInputs& in) { return in.critical() ? due5_bound(in) : cor32_bound(in); }

double prop41_bound(const BoundInputs& in) {
  check_regime(in);
  if (in.critical()) throw BranchError("the local comparison needs a nonzero gradient");
  if (!in.hessian_norm || !in.hessian_osc) throw PreconditionError("the local comparison needs Hessian data");
  const double s = in.s, eps = in.eps, H = *in.hessian_norm;
  if (eps * H > in.grad_norm) throw OutOfRegime("the local comparison needs eps |D^2 phi(x)| <= |p_x|");
  return small_c(s) * s *
         (2 * std::pow(eps, 3 - 2 * s) * H * H / in.grad_norm + std::pow(eps, 2 - 2 * s) * *in.hessian_osc);
}

double midpoint_local_bound(const BoundInputs& in) {
  if (in.critical()) throw BranchError("the local midpoint bound needs a nonzero gradient");
  if (!in.hessian_norm || !in.hessian_osc) throw PreconditionError("the local midpoint bound needs Hessian data");
  const double eps = in.eps, H = *in.hessian_norm;
  return 4 * eps * eps * eps * H * H / in.grad_norm + eps * eps * *in.hessian_osc;
}

BoundBreakdown lemma51_terms(const BoundInputs& in, double R, double alpha) {
  check_regime(in);
  if (!(R > std::max(in.eta, 1.0))) throw OutOfRegime("prism bound needs R > max(eta_x, 1)");
  if (!(alpha > 0 && alpha < 0.5)) throw OutOfRegime("prism bound needs 0 < alpha < 1/2");
  const double eta = in.eta;
  return {"prism_vs_line",
          {{"truncation", 2 * std::pow(in.eps / R, 2 * in.s) * in.sup_norm},
           {"angular",
            std::max(2 * (in.grad_norm + 2 * in.c_x * eta) * eta * alpha, 3 * R * in.omega(alpha))}}};
}

double lemma51_bound(const BoundInputs& in, double R, double alpha) { return lemma51_terms(in, R, alpha).total(); }

PrismSchedule cor52_schedule(double eps, double s) {
  check_order(s);
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const PrismSchedule p{std::pow(eps, 1 / (2 * s) - 1), std::pow(eps, 4 * s - 1 / (2 * s))};
  std::ostringstream msg;
  if (!(p.alpha < 0.5)) msg << "schedule violates alpha < 1/2 (alpha=" << p.alpha << ")";
  else if (!(p.R > 1)) msg << "schedule violates R > 1 (R=" << p.R << ")";
  if (!msg.str().empty()) throw OutOfRegime(msg.str());
  return p;
}

BoundBreakdown cor52_terms(const BoundInputs& in) {
  check_regime(in);
  if (!in.lipschitz) throw PreconditionError("the prism expansion bound needs a Lipschitz constant");
  if (in.eta > 1) throw OutOfRegime("the prism expansion bound needs eta_x <= 1");
  cor52_schedule(in.eps, in.s);
  const double s = in.s, eps = in.eps, eta = in.eta, L = *in.lipschitz, e4 = std::pow(eps, 4 * s - 1);
  BoundBreakdown b{"expansion_prism",
                   {{"truncation_and_angle", e4 * (2 * in.sup_norm + 3 * L)},
                    {"local", s / (1 - s) * 2 * in.c_x * eps * eps}}};
  if (!in.critical()) {
    const double m = std::max(2 * in.c_x / (1 - s), sum_eta(s, eta) / (2 * s - 1) * L);
    b.terms.push_back({"direction", 32 / in.grad_norm * e4 * (8 * s / (1 - s) + far_weight(s, eta) * L) * m});
  }
  return b;
}

double cor52_bound(const BoundInputs& in) { return cor52_terms(in).total(); }

double kappa_bound_bounded(const BoundInputs& in) {
  require_gradient(in);
  const double s = in.s;
  return 8 * std::sqrt(in.sup_norm / in.grad_norm * sum_eta(s, in.eta) / (2 * s - 1)) * std::pow(in.eps, s - 0.5);
}

double kappa_bound_holder(const BoundInputs& in) {
  require_gradient(in);
  if (!in.holder_seminorm) throw PreconditionError("no Holder seminorm");
  const double s = in.s, a = in.holder_alpha;
  return std::pow(32 * *in.holder_seminorm / in.grad_norm * sum_eta(s, in.eta) / (2 * s - 1), 1 / (2 - a)) *
         std::pow(in.eps, (2 * s - 1) / (2 - a));
}

double kappa_bound_lipschitz(const BoundInputs& in) {
  require_gradient(in);
  if (!in.lipschitz) throw PreconditionError("no Lipschitz constant");
  const double s = in.s;
  return 32 * *in.lipschitz / in.grad_norm * sum_eta(s, in.eta) / (2 * s - 1) * std::pow(in.eps, 2 * s - 1);
}

double a_eps_bound_lipschitz(const BoundInputs& in) {
  require_gradient(in);
  if (!in.lipschitz) throw PreconditionError("no Lipschitz constant");
  const double s = in.s, eta = in.eta;
  return 32 / in.grad_norm *
         std::max(2 * in.c_x * std::pow(eta, 2 - 2 * s) / (1 - s), *in.lipschitz * sum_eta(s, eta) / (2 * s - 1)) *
         std::pow(in.eps, 2 * s - 1);
}

double thm2_limit_expression(const BoundInputs& in) {
  if (in.critical()) throw BranchError("the limit expression needs a nonzero gradient");
  if (!in.hessian_norm || !in.hessian_osc) throw PreconditionError("the limit expression needs Hessian data");
  const double eps = in.eps, H = *in.hessian_norm;
  return 2 * eps * eps * eps * H * H / in.grad_norm + eps * eps * *in.hessian_osc;
}

double thm1_order(double s) { return std::min(4 * s - 1, 2.0); }
double thm2_order(double s) { return std::min(4 * s - 1, 3.0); }
double thm1_order_holder(double s, double alpha) {
  return std::min(2 * s + alpha * (2 * s - 1) / (2 - alpha), 2.0);
}

}  // namespace fraclap
