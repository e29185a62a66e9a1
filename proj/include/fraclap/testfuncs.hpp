#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/linalg.hpp"

namespace fraclap {

/// Bounded test function with optional derivatives and the local data the
/// error bounds need: radius eta_x of the C^2 ball, C_x = 1/2 sup |Hessian|
/// over that ball, and a modulus of continuity.
struct TestFunction {
  std::string name;
  std::string description;
  int dim = 1;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> gradient;  // empty when unavailable
  std::function<Mat(const Vec&)> hessian;   // empty when unavailable
  double sup_norm = 0.0;
  std::function<double(const Vec&)> eta;
  std::function<double(const Vec&)> c_bound;
  std::optional<double> lipschitz;
  std::optional<double> holder_seminorm;
  double holder_alpha = 1.0;
  /// Fallback modulus when neither Lipschitz nor Holder data is stored.
  std::function<double(double)> modulus;
  /// Where the catalog expects the entry to be evaluated.
  Vec point;
  /// Exact fractional operator value at a point, when known in closed form.
  std::function<std::optional<double>(const Vec&, double)> exact_lap_frac;

  double operator()(const Vec& z) const { return eval(z); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// omega_phi(a). Lipschitz entries give min(Lip a, 2 sup), Holder entries [phi]_alpha a^alpha.
double modulus_of(const TestFunction& phi, double a);

/// Default catalog entries (2-D unless the name says otherwise).
std::vector<TestFunction> catalog();
/// Names accepted by make_entry, for usage messages.
std::vector<std::string> catalog_names();
/// Builds an entry from "name[:key=value;key=value]", e.g. "cosine:xi=1,0".
TestFunction make_entry(const std::string& spec);

/// Largest spectral norm of the Hessian over the closed ball B(x, r), by a
/// deterministic sample grid refined with a compass search.
double sup_hessian_norm(const TestFunction& phi, const Vec& x, double r);
/// Same search for |H(y) - H(x)| over B(x, r).
double hessian_oscillation(const TestFunction& phi, const Vec& x, double r);

/// phi(lambda z), with derivatives and metadata rescaled.
TestFunction rescaled(const TestFunction& phi, double lambda);
/// phi(z + shift), so the translate evaluated at x - shift matches phi at x.
TestFunction translated(const TestFunction& phi, const Vec& shift);
/// -phi.
TestFunction negated(const TestFunction& phi);

}  // namespace fraclap
