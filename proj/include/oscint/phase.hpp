#pragma once

#include <cmath>
#include <optional>

namespace oscint {

/// Phase of an oscillatory tail component, psi(u) = c (u + shift)^p + b u + theta.
///
/// The family is closed under translation, dilation, modulation by e^{iau}
/// and under addition whenever the power parts agree, which covers every
/// oscillation the built-in functions produce. Evaluation requires
/// u + shift > 0 when c != 0.
struct Phase {
  double c = 0.0;
  double p = 1.0;
  double shift = 0.0;
  double b = 0.0;
  double theta = 0.0;

  static Phase linear(double slope, double offset = 0.0) { return {0.0, 1.0, 0.0, slope, offset}; }
  static Phase power(double coef, double exponent, double sh = 0.0) {
    return {coef, exponent, sh, 0.0, 0.0};
  }

  double value(double u) const {
    double v = b * u + theta;
    if (c != 0.0) v += c * std::pow(u + shift, p);
    return v;
  }
  double d1(double u) const {
    double v = b;
    if (c != 0.0) v += c * p * std::pow(u + shift, p - 1.0);
    return v;
  }
  double d2(double u) const {
    if (c == 0.0) return 0.0;
    return c * p * (p - 1.0) * std::pow(u + shift, p - 2.0);
  }

  bool is_constant() const { return c == 0.0 && b == 0.0; }
  bool is_linear() const { return c == 0.0; }

  /// Same shape up to the additive constant theta.
  bool same_shape(const Phase& o) const {
    if (c == 0.0 && o.c == 0.0) return b == o.b;
    return c == o.c && p == o.p && shift == o.shift && b == o.b;
  }

  Phase with_theta(double t) const {
    Phase r = *this;
    r.theta = t;
    return r;
  }

  /// Sum of two phases when the result stays inside the family.
  std::optional<Phase> plus(const Phase& o) const {
    Phase r;
    r.b = b + o.b;
    r.theta = theta + o.theta;
    if (c == 0.0) {
      r.c = o.c;
      r.p = o.p;
      r.shift = o.shift;
    } else if (o.c == 0.0) {
      r.c = c;
      r.p = p;
      r.shift = shift;
    } else if (p == o.p && shift == o.shift) {
      r.c = c + o.c;
      r.p = p;
      r.shift = shift;
    } else {
      return std::nullopt;
    }
    if (r.c == 0.0) {
      r.p = 1.0;
      r.shift = 0.0;
    }
    return r;
  }

  /// Phase of u -> psi(u + y).
  Phase translated(double y) const {
    Phase r = *this;
    r.shift += y;
    r.theta += b * y;
    if (r.c == 0.0) r.shift = 0.0;
    return r;
  }

  /// Phase of u -> psi(u / y), y > 0.
  Phase dilated(double y) const {
    Phase r = *this;
    if (c != 0.0) {
      r.c = c * std::pow(y, -p);
      r.shift = shift * y;
    }
    r.b = b / y;
    return r;
  }

  /// Largest stationary point (psi'(u) = 0) with u + shift > 0, if any.
  /// psi'' keeps one sign on u > -shift, so there is at most one.
  std::optional<double> stationary_point() const {
    if (c == 0.0 || p == 1.0) return std::nullopt;
    double ratio = -b / (c * p);
    if (!(ratio > 0.0)) return std::nullopt;
    return std::pow(ratio, 1.0 / (p - 1.0)) - shift;
  }
};

}  // namespace oscint
