#include "fraclap/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace fraclap {

Vec::Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
  int i = 0;
  for (double x : xs) {
    if (i < kMaxDim) c[i] = x;
    ++i;
  }
  if (n > kMaxDim) n = kMaxDim;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

Vec operator-(const Vec& a) {
  Vec r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = -a.c[i];
  return r;
}

Vec operator*(double t, const Vec& a) {
  Vec r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = t * a.c[i];
  return r;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
  return s;
}

double norm(const Vec& a) {
  switch (a.n) {
    case 1: return std::abs(a.c[0]);
    case 2: return std::hypot(a.c[0], a.c[1]);
    default: return std::sqrt(dot(a, a));
  }
}

Vec normalized(const Vec& a) { return (1.0 / norm(a)) * a; }

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.n; ++i) {
    if (a.c[i] < b.c[i]) return true;
    if (a.c[i] > b.c[i]) return false;
  }
  return false;
}

std::string to_string(const Vec& a) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < a.n; ++i) os << (i ? "," : "") << a.c[i];
  os << ')';
  return os.str();
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat r(a.n);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = a.a[i] - b.a[i];
  return r;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat r(a.n);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = a.a[i] + b.a[i];
  return r;
}

Mat operator*(double t, const Mat& a) {
  Mat r(a.n);
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = t * a.a[i];
  return r;
}

Mat outer(const Vec& u, const Vec& v) {
  Mat r(u.n);
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < u.n; ++j) r(i, j) = u.c[i] * v.c[j];
  return r;
}

Mat identity(int dim) {
  Mat r(dim);
  for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
  return r;
}

Vec apply(const Mat& m, const Vec& v) {
  Vec r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r.c[i] += m(i, j) * v.c[j];
  return r;
}

double quad_form(const Mat& m, const Vec& v) { return dot(v, apply(m, v)); }

double trace(const Mat& m) {
  double t = 0.0;
  for (int i = 0; i < m.n; ++i) t += m(i, i);
  return t;
}

double spectral_norm(const Mat& m) {
  if (m.n == 1) return std::abs(m(0, 0));
  if (m.n == 2) {
    const double h = 0.5 * (m(0, 0) + m(1, 1));
    const double d = std::hypot(0.5 * (m(0, 0) - m(1, 1)), 0.5 * (m(0, 1) + m(1, 0)));
    return std::max(std::abs(h + d), std::abs(h - d));
  }
  // Cyclic Jacobi; 3x3 converges in a handful of sweeps.
  double a[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = 0.5 * (m(i, j) + m(j, i));
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double diag = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2];
    if (off <= 1e-32 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0), sn = t * cs;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = cs * akp - sn * akq;
          a[k][q] = sn * akp + cs * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = cs * apk - sn * aqk;
          a[q][k] = sn * apk + cs * aqk;
        }
      }
    }
  }
  return std::max({std::abs(a[0][0]), std::abs(a[1][1]), std::abs(a[2][2])});
}

}  // namespace fraclap
