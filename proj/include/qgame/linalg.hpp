#pragma once

// Complex linear algebra on the 2-dimensional strategy space and its
// 4-dimensional tensor product. Fixed-size, value-semantic, allocation-free.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qgame {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerance for algebraic identities between O(1) trigonometric quantities.
inline constexpr double kAlgebraTol = 1e-12;
/// Gate used when an operation requires a Hermitian input.
inline constexpr double kHermitianTol = 1e-10;

struct Matrix2 {
  std::array<Complex, 4> m{};  // row-major

  Complex& operator()(int r, int c) { return m[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  static Matrix2 zero() { return {}; }
  static Matrix2 identity() {
    Matrix2 e;
    e(0, 0) = 1.0;
    e(1, 1) = 1.0;
    return e;
  }

  Matrix2 adjoint() const {
    Matrix2 a;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) a(r, c) = std::conj((*this)(c, r));
    return a;
  }

  Complex trace() const { return m[0] + m[3]; }

  double max_abs() const {
    double v = 0.0;
    for (const Complex& z : m) v = std::max(v, std::abs(z));
    return v;
  }

  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    Matrix2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
  }
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
    Matrix2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
  }
  friend Matrix2 operator*(Complex s, const Matrix2& a) {
    Matrix2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
    return r;
  }
  friend Matrix2 operator*(double s, const Matrix2& a) {
    return Complex(s, 0.0) * a;
  }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
};

struct Matrix4 {
  std::array<Complex, 16> m{};  // row-major

  Complex& operator()(int r, int c) { return m[4 * r + c]; }
  const Complex& operator()(int r, int c) const { return m[4 * r + c]; }

  static Matrix4 zero() { return {}; }
  static Matrix4 identity() {
    Matrix4 e;
    for (int i = 0; i < 4; ++i) e(i, i) = 1.0;
    return e;
  }

  Matrix4 adjoint() const {
    Matrix4 a;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) a(r, c) = std::conj((*this)(c, r));
    return a;
  }

  Complex trace() const { return m[0] + m[5] + m[10] + m[15]; }

  double max_abs() const {
    double v = 0.0;
    for (const Complex& z : m) v = std::max(v, std::abs(z));
    return v;
  }

  friend Matrix4 operator+(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
  }
  friend Matrix4 operator-(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
  }
  friend Matrix4 operator*(double s, const Matrix4& a) {
    Matrix4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = s * a.m[i];
    return r;
  }
  friend Matrix4 operator*(const Matrix4& a, const Matrix4& b) {
    Matrix4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Complex s = 0.0;
        for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
};

/// Wave-function strategy (cos α, e^{iθ} sin α). Angles are normalized on
/// construction: α modulo π, θ modulo 2π — every observable quantity built
/// from the state has these periods.
class StateVector {
 public:
  StateVector() = default;

  StateVector(double alpha, double theta) {
    if (!std::isfinite(alpha) || !std::isfinite(theta))
      throw std::domain_error("StateVector: angles must be finite");
    alpha_ = std::fmod(alpha, kPi);
    if (alpha_ < 0.0) alpha_ += kPi;
    theta_ = std::fmod(theta, kTwoPi);
    if (theta_ < 0.0) theta_ += kTwoPi;
  }

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }

  Complex c1() const { return Complex(std::cos(alpha_), 0.0); }
  Complex c2() const {
    return std::sin(alpha_) * Complex(std::cos(theta_), std::sin(theta_));
  }

 private:
  double alpha_ = 0.0;
  double theta_ = 0.0;
};

inline StateVector make_state(double alpha, double theta) {
  return StateVector(alpha, theta);
}

/// Rank-1 projector |v><v|.
inline Matrix2 projector_from_state(const StateVector& v) {
  const Complex a = v.c1();
  const Complex b = v.c2();
  Matrix2 p;
  p(0, 0) = a * std::conj(a);
  p(0, 1) = a * std::conj(b);
  p(1, 0) = b * std::conj(a);
  p(1, 1) = b * std::conj(b);
  return p;
}

inline double hermiticity_error(const Matrix2& m) {
  return (m - m.adjoint()).max_abs();
}

inline double hermiticity_error(const Matrix4& m) {
  return (m - m.adjoint()).max_abs();
}

/// <v|M|v> for Hermitian M. The imaginary residue (bounded by the
/// Hermiticity gate) is discarded.
inline double expectation(const Matrix2& m, const StateVector& v) {
  if (hermiticity_error(m) > kHermitianTol)
    throw std::domain_error("expectation: matrix is not Hermitian");
  const Complex a = v.c1();
  const Complex b = v.c2();
  const Complex mv0 = m(0, 0) * a + m(0, 1) * b;
  const Complex mv1 = m(1, 0) * a + m(1, 1) * b;
  return (std::conj(a) * mv0 + std::conj(b) * mv1).real();
}

/// Product state a ⊗ b as a 4-component column, index 2i+k = a_i * b_k.
inline std::array<Complex, 4> kron(const StateVector& a, const StateVector& b) {
  const std::array<Complex, 2> u{a.c1(), a.c2()};
  const std::array<Complex, 2> w{b.c1(), b.c2()};
  std::array<Complex, 4> out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out[2 * i + k] = u[i] * w[k];
  return out;
}

inline double expectation(const Matrix4& m, const std::array<Complex, 4>& v) {
  if (hermiticity_error(m) > kHermitianTol)
    throw std::domain_error("expectation: matrix is not Hermitian");
  Complex acc = 0.0;
  for (int r = 0; r < 4; ++r) {
    Complex mv = 0.0;
    for (int c = 0; c < 4; ++c) mv += m(r, c) * v[c];
    acc += std::conj(v[r]) * mv;
  }
  return acc.real();
}

/// Kronecker product, (M ⊗ N)[2i+k][2j+l] = M[i][j] N[k][l].
/// The first factor indexes the slow (block) position.
inline Matrix4 tensor(const Matrix2& a, const Matrix2& b) {
  Matrix4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

/// True iff M is Hermitian and idempotent within tol (max-entry norm).
inline bool is_projector(const Matrix2& m, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("is_projector: tol must be > 0");
  if (hermiticity_error(m) > tol) return false;
  return (m * m - m).max_abs() <= tol;
}

}  // namespace qgame
