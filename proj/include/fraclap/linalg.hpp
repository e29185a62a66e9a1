#pragma once

#include <array>
#include <cmath>
#include <string>

namespace fraclap {

/// Dimensions handled by the library. Higher N is rejected at the API edge.
constexpr int kMaxDim = 3;

/// Small fixed-capacity vector in R^N, N <= 3.
struct Vec {
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};
  int n = 0;

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  Vec(std::initializer_list<double> xs);

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
  int dim() const { return n; }
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator-(const Vec& a);
Vec operator*(double t, const Vec& a);
double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec normalized(const Vec& a);
/// Lexicographic strict order on components, used for deterministic tie-breaks.
bool lex_less(const Vec& a, const Vec& b);
std::string to_string(const Vec& a);

/// Symmetric N x N matrix stored densely.
struct Mat {
  std::array<double, kMaxDim * kMaxDim> a{};
  int n = 0;

  Mat() = default;
  explicit Mat(int dim) : n(dim) {}
  double& operator()(int i, int j) { return a[i * kMaxDim + j]; }
  double operator()(int i, int j) const { return a[i * kMaxDim + j]; }
};

Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double t, const Mat& a);
Mat operator+(const Mat& a, const Mat& b);
Mat outer(const Vec& u, const Vec& v);
Mat identity(int dim);
Vec apply(const Mat& m, const Vec& v);
double quad_form(const Mat& m, const Vec& v);
double trace(const Mat& m);
/// Operator 2-norm of a symmetric matrix (largest |eigenvalue|).
double spectral_norm(const Mat& m);

}  // namespace fraclap
