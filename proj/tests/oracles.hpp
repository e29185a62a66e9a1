#pragma once
// Independent reference computations for tests. These go through Boost.Math
// so they share no code with the library's own quadrature.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>

namespace oracle {

inline double plain_quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, 1e-14);
}

/// int_1^inf cos(c + w t) t^{-p} dt for w > 0.
inline double cos_tail_from_one(double c, double w, double p) {
  static boost::math::quadrature::ooura_fourier_cos<double> oc(1e-13);
  static boost::math::quadrature::ooura_fourier_sin<double> os(1e-13);
  // t = 1 + u: cos(c + w + w u) = cos(c+w) cos(wu) - sin(c+w) sin(wu)
  auto g = [p](double u) { return std::pow(1.0 + u, -p); };
  const double ic = oc.integrate(g, w).first, is = os.integrate(g, w).first;
  return std::cos(c + w) * ic - std::sin(c + w) * is;
}

/// int_0^inf (1 - cos t) t^{-1-2s} dt. On [0, 1] the substitution t = u^m,
/// m = 1/(2-2s), leaves the smooth integrand 2m (sin(t/2)/t)^2; plain
/// quadrature on t itself degrades as s -> 1.
inline double one_minus_cos_integral(double s) {
  const double p = 1.0 + 2.0 * s, m = 1.0 / (2.0 - 2.0 * s);
  auto head = [m](double u) {
    const double t = std::pow(u, m);
    if (t < 1e-8) return 0.5 * m;
    const double q = std::sin(0.5 * t) / t;
    return 2.0 * m * q * q;
  };
  const double near = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(head, 0.0, 1.0, 15, 1e-14);
  return near + 1.0 / (2.0 * s) - cos_tail_from_one(0.0, 1.0, p);
}

/// C_s from its cosine-integral characterization.
inline double frac_constant_by_cosine(double s) { return 1.0 / (2.0 * one_minus_cos_integral(s)); }

/// int_eps^inf cos(c + w t) t^{-1-2s} dt, w > 0.
inline double cos_line_integral(double c, double w, double s, double eps) {
  static boost::math::quadrature::ooura_fourier_cos<double> oc(1e-13);
  static boost::math::quadrature::ooura_fourier_sin<double> os(1e-13);
  const double p = 1.0 + 2.0 * s;
  auto g = [p, eps](double u) { return std::pow(eps + u, -p); };
  const double ic = oc.integrate(g, w).first, is = os.integrate(g, w).first;
  return std::cos(c + w * eps) * ic - std::sin(c + w * eps) * is;
}

}  // namespace oracle
