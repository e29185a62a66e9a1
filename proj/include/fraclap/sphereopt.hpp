#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fraclap/linalg.hpp"

namespace fraclap {

struct OptSpec {
  int seeds_2d = 256;
  int seeds_3d = 1024;
  int max_iterations = 40;    // bracket contractions per refinement
  double contraction = 0.618;
  double tol = 1e-10;          // value tolerance for ties
  /// Divergence rates closer than this compare as equal (extended values only).
  double rate_tol = 1e-9;
  int refine_candidates = 3;
  int ball_shells = 8;
  void validate() const;
};

/// Value of an integral that may diverge like rate * int_0 t dmu_s. Ordered
/// lexicographically: rate first, then the finite part.
struct DivergentValue {
  double rate = 0.0;
  double finite = 0.0;
};

template <class V>
struct Extremum {
  Vec argopt;
  V value{};
  int seeds = 0;
  int iterations = 0;
  double achieved_tol = 0.0;  // angular (or spatial) bracket at exit
  bool stagnated = false;
};

using ExtremumResult = Extremum<double>;
using DirFn = std::function<double(const Vec&)>;
template <class V>
using DirFnT = std::function<V(const Vec&)>;
template <class V>
using PairFnT = std::function<V(const Vec&, const Vec&)>;

/// Deterministic seed directions on S^{N-1}: {-1,+1}, an angular grid, or a Fibonacci lattice.
std::vector<Vec> sphere_seeds(int N, const OptSpec& spec);

template <class V>
Extremum<V> sphere_max_t(const DirFnT<V>& obj, int N, const OptSpec& spec = {});
template <class V>
Extremum<V> sphere_min_t(const DirFnT<V>& obj, int N, const OptSpec& spec = {});
/// Max and min sharing one pass over the seed grid.
template <class V>
std::pair<Extremum<V>, Extremum<V>> sphere_extrema_t(const DirFnT<V>& obj, int N, const OptSpec& spec = {});
/// sup_y inf_z obj(y, z): returns the outer maximizer and the inner minimizer at it.
template <class V>
std::pair<Extremum<V>, Extremum<V>> supinf_pair_t(const PairFnT<V>& obj, int N, const OptSpec& spec = {});
/// inf_z sup_y obj(y, z), for diagnostics only.
template <class V>
V infsup_value_t(const PairFnT<V>& obj, int N, const OptSpec& spec = {});

inline ExtremumResult sphere_max(const DirFn& obj, int N, const OptSpec& spec = {}) { return sphere_max_t<double>(obj, N, spec); }
inline ExtremumResult sphere_min(const DirFn& obj, int N, const OptSpec& spec = {}) { return sphere_min_t<double>(obj, N, spec); }
inline std::pair<ExtremumResult, ExtremumResult> sphere_extrema(const DirFn& obj, int N, const OptSpec& spec = {}) {
  return sphere_extrema_t<double>(obj, N, spec);
}
inline std::pair<ExtremumResult, ExtremumResult> supinf_pair(const PairFnT<double>& obj, int N, const OptSpec& spec = {}) {
  return supinf_pair_t<double>(obj, N, spec);
}

struct BallExtrema {
  double sup = 0.0;
  double inf = 0.0;
  Vec argsup;
  Vec arginf;
  double achieved_tol = 0.0;
};

/// sup and inf of f over the closed ball B(x, eps). Optional warm-start
/// directions (unit vectors) seed the boundary search.
BallExtrema ball_extrema(const DirFn& f, const Vec& x, double eps, const OptSpec& spec = {},
                         const std::vector<Vec>& warm = {});

}  // namespace fraclap
