#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cctype>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qknow {

/// Exact rational with arbitrary-precision numerator and denominator.
/// GMP keeps every result in lowest terms with a positive denominator.
using Rational = mpq_class;

/// Parses `-?<digits>(/<digits>)?` with a positive denominator.
/// Non-reduced input such as "2/4" is accepted and canonicalized.
inline std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '-') ++pos;
  auto scan_digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    return end;
  };
  const std::size_t num_end = scan_digits(pos);
  if (num_end == pos) return std::nullopt;
  std::size_t end = num_end;
  if (end < text.size() && text[end] == '/') {
    const std::size_t den_end = scan_digits(end + 1);
    if (den_end == end + 1) return std::nullopt;
    end = den_end;
  }
  if (end != text.size()) return std::nullopt;

  Rational value;
  const std::string owned(text);
  if (value.set_str(owned, 10) != 0) return std::nullopt;
  if (value.get_den() == 0) return std::nullopt;
  value.canonicalize();
  return value;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Complex number with exact rational real and imaginary parts.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  template <std::integral I>
  GaussianRational(I re) : re_(static_cast<long>(re)), im_(0) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }

  /// |z|^2, always a nonnegative rational.
  Rational norm() const { return Rational(re_ * re_ + im_ * im_); }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero Gaussian rational");
    const Rational n = o.norm();
    Rational re = (re_ * o.re_ + im_ * o.im_) / n;
    Rational im = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Renders as "re", "im*i", or "re+im*i", omitting a unit coefficient on i:
/// "1/2", "-i", "1-2*i", "3/4*i".
inline std::string to_string(const GaussianRational& z) {
  const Rational& re = z.real();
  const Rational& im = z.imag();
  if (sgn(im) == 0) return to_string(re);

  std::string imag_part;
  if (im == 1) {
    imag_part = "i";
  } else if (im == -1) {
    imag_part = "-i";
  } else {
    imag_part = to_string(im) + "*i";
  }
  if (sgn(re) == 0) return imag_part;
  if (imag_part.front() != '-') imag_part.insert(imag_part.begin(), '+');
  return to_string(re) + imag_part;
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << to_string(z); }

}  // namespace qknow
