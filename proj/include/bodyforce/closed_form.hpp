#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/quadrature.hpp"

// Closed-form cosine/sine moments of separable trig polynomials on the unit
// square, with removable singularities rewritten into cancellation-free forms.

namespace bodyforce::closed_form {

/// sin(x)/x.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// (1 − cos b)/b = (b/2)·sinc²(b/2); odd in b.
inline double ver(double b) {
  const double s = sinc(0.5 * b);
  return 0.5 * b * s * s;
}

/// ∫₀¹ p(x)cos(ax) dx and ∫₀¹ p(x)sin(ax) dx.
struct Moment1D {
  double c = 0.0;
  double s = 0.0;
};

/// One factor of a separable term: 1, x, cos(kx) or sin(kx).
struct Profile1D {
  enum class Kind { Const, Linear, Cos, Sin };
  Kind kind = Kind::Const;
  double k = 0.0;

  static Profile1D constant() { return {Kind::Const, 0.0}; }
  static Profile1D linear() { return {Kind::Linear, 0.0}; }
  static Profile1D cosine(double k) { return {Kind::Cos, k}; }
  static Profile1D sine(double k) { return {Kind::Sin, k}; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Const: return 1.0;
      case Kind::Linear: return x;
      case Kind::Cos: return std::cos(k * x);
      case Kind::Sin: return std::sin(k * x);
    }
    return 0.0;
  }

  Moment1D moment(double a) const {
    switch (kind) {
      case Kind::Const: return {sinc(a), ver(a)};
      case Kind::Linear: {
        if (std::abs(a) < 0.05) {
          const double a2 = a * a;
          return {0.5 - a2 / 8.0 + a2 * a2 / 144.0 - a2 * a2 * a2 / 5760.0,
                  a * (1.0 / 3.0 - a2 / 30.0 + a2 * a2 / 840.0 - a2 * a2 * a2 / 45360.0)};
        }
        const double sa = std::sin(a), ca = std::cos(a);
        return {sa / a + (ca - 1.0) / (a * a), sa / (a * a) - ca / a};
      }
      case Kind::Cos: return {0.5 * (sinc(a - k) + sinc(a + k)), 0.5 * (ver(a + k) + ver(a - k))};
      case Kind::Sin: return {0.5 * (ver(k + a) + ver(k - a)), 0.5 * (sinc(k - a) - sinc(k + a))};
    }
    return {};
  }
};

/// coef · px(x1) · py(x2)
struct SeparableTerm {
  double coef = 1.0;
  Profile1D px;
  Profile1D py;
};

/// Finite sum of separable terms with closed-form cosine moments.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  explicit TrigPolynomial(std::vector<SeparableTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<SeparableTerm>& terms() const { return terms_; }

  double operator()(double x1, double x2) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.coef * t.px(x1) * t.py(x2);
    return v;
  }

  /// ∫_Ω w(x) cos(α·x) dx
  double cosine_moment(const Frequency2D& a) const {
    double v = 0.0;
    for (const auto& t : terms_) {
      const auto mx = t.px.moment(a.alpha1);
      const auto my = t.py.moment(a.alpha2);
      v += t.coef * (mx.c * my.c - mx.s * my.s);
    }
    return v;
  }

  /// ∫_Ω w(x) sin(α·x) dx
  double sine_moment(const Frequency2D& a) const {
    double v = 0.0;
    for (const auto& t : terms_) {
      const auto mx = t.px.moment(a.alpha1);
      const auto my = t.py.moment(a.alpha2);
      v += t.coef * (mx.s * my.c + mx.c * my.s);
    }
    return v;
  }

  ScalarField2D as_field() const {
    auto self = *this;
    return ScalarField2D::analytic([self](double x1, double x2) { return self(x1, x2); });
  }

 private:
  std::vector<SeparableTerm> terms_;
};

/// sin(a)/(a² − K²) and (1 − cos a)/(a² − K²) for K = 2πm (m ≥ 1 integer, passed
/// as m). Near a = ±K the periodicity sin(K + e) = sin e removes the 0/0.
struct ShiftedQuotients {
  double sigma = 0.0;
  double kappa = 0.0;
};

inline ShiftedQuotients shifted_quotients(double a, double m) {
  const double K = 2.0 * std::numbers::pi * m;
  const double em = a - K, ep = a + K;
  if (std::abs(em) < 0.5) {
    // a² − K² = e(e + 2K)
    return {sinc(em) / (em + 2.0 * K), ver(em) / (em + 2.0 * K)};
  }
  if (std::abs(ep) < 0.5) {
    return {sinc(ep) / (ep - 2.0 * K), ver(ep) / (ep - 2.0 * K)};
  }
  const double den = a * a - K * K;
  return {std::sin(a) / den, (1.0 - std::cos(a)) / den};
}

/// (π³/3)·sin ω/(π² − ω²) written as (π³/3)·sinc(π − ω)/(π + ω), finite at ω = π.
/// For ω ≥ 0 this equals ∫₀¹ (π²/3) sin(π(1−t)) sin(ωt) dt.
inline double sine_profile_moment(double omega) {
  const double pi = std::numbers::pi;
  if (omega < 0.0) return -sine_profile_moment(-omega);
  return pi * pi * pi / 3.0 * sinc(pi - omega) / (pi + omega);
}

}  // namespace bodyforce::closed_form
