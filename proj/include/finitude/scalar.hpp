#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

namespace finitude {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Element of Q(i): exact complex coefficients.
class Gaussian {
 public:
  Gaussian() = default;
  Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT(implicit)
  Gaussian(long re) : re_(re) {}                 // NOLINT(implicit)
  Gaussian(int re) : re_(re) {}                  // NOLINT(implicit)
  Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Gaussian i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Gaussian conj() const { return {re_, -im_}; }

  /// re^2 + im^2, the square of the modulus.
  Rational abs_squared() const { return Rational(re_ * re_ + im_ * im_); }

  Gaussian& operator+=(const Gaussian& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Gaussian& operator/=(const Gaussian& o) {
    Rational d = o.abs_squared();
    if (sgn(d) == 0) throw std::domain_error("division by zero in Q(i)");
    Gaussian q = *this * o.conj();
    re_ = q.re_ / d;
    im_ = q.im_ / d;
    return *this;
  }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Gaussian& g) {
    if (g.is_real()) return os << g.re_;
    return os << "(" << g.re_ << (sgn(g.im_) < 0 ? "-" : "+") << abs(g.im_) << "i)";
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::string to_string(const Gaussian& g) {
  std::string s = g.re().get_str();
  if (!g.is_real()) {
    s += (sgn(g.im()) < 0 ? "-" : "+");
    s += Rational(abs(g.im())).get_str();
    s += "i";
  }
  return s;
}

}  // namespace finitude
