#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "fraclap/corelap.hpp"

namespace fraclap {

/// T(y) = { z : sin(angle(y,z)/2) < alpha, <y,z> > 0, eps < |z| < R }.
struct PrismSpec {
  double eps = 0.1;
  double R = 1.0;
  double alpha = 0.25;
  Vec axis;
  void validate() const;
};

struct GridSpec {
  double h = 0.01;
  int n_directions = 8;
};

/// Half-opening angle of the cap, min(2 arcsin alpha, pi/2).
double cap_half_angle(double alpha);
/// Area of S_alpha = T(0, inf, alpha) on the unit sphere; 1 for N = 1.
double cap_area(double alpha, int N);

bool prism_contains(const PrismSpec& spec, const Vec& z);
/// mu_s^N(T) = C(N,s) |S_alpha| (eps^{-2s} - R^{-2s}) / (2s).
double prism_measure(const PrismSpec& spec, double s, int N);

/// Average of phi(x+z) over T(axis) against mu_s^N.
double prism_average(const TestFunction& phi, const Vec& x, const PrismSpec& spec, double s,
                     const QuadSpec& quad = {});

struct PrismParts {
  double sup = 0.0;
  double inf = 0.0;
  Vec sup_axis;
  Vec inf_axis;
  double value() const { return 0.5 * (sup + inf); }
};
PrismParts prism_parts(const TestFunction& phi, const Vec& x, double eps, double R, double alpha, double s,
                       const CoreSpec& spec = {});
/// Midpoint of the extremal prism averages over the axis direction.
double average_prism_o(const TestFunction& phi, const Vec& x, double eps, double R, double alpha, double s,
                       const CoreSpec& spec = {});

/// Unit directions theta_1..theta_n: e^{2 pi i k/n} for N = 2, a Fibonacci
/// lattice for N = 3, {-1, +1} for N = 1.
std::vector<Vec> grid_directions(int N, int n);

struct StencilPoint {
  std::array<long, 3> m{};  // x_j = h m, unused trailing entries zero
  Vec x;
  double weight = 0.0;  // |x_j|^{-N-2s}
};
/// Grid points of hZ^N inside T(axis), ascending |x_j| with lexicographic ties on m.
std::vector<StencilPoint> prism_stencil(const PrismSpec& spec, double s, double h);
void write_stencil_csv(std::ostream& os, const std::vector<StencilPoint>& pts);

/// The discrete prism average at a grid point.
double average_discrete(const TestFunction& phi, const Vec& xk, double eps, double R, double alpha, double s,
                        const GridSpec& grid);

}  // namespace fraclap
