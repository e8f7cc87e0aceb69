#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace fms {

// Exact rational number. All distances, Katetov values and witness radii in
// this library are Rationals; no floating point appears anywhere in the core.
// Backed by an arbitrary-precision integer pair kept in lowest terms with a
// positive denominator.
class Rational {
 public:
  using Backend = boost::multiprecision::cpp_rational;

  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  explicit Rational(Backend v) : v_(std::move(v)) {}

  // Strict parse of "p" or "p/q": optional leading '-', then digits; the
  // denominator part must be a plain positive integer (no sign). Returns
  // nullopt on anything else, including "1/0" and "3/-2".
  static std::optional<Rational> parse(std::string_view text);

  // "p" when the denominator is 1, otherwise "p/q" (q > 0).
  std::string str() const;

  boost::multiprecision::cpp_int numerator() const;
  boost::multiprecision::cpp_int denominator() const;

  bool is_zero() const { return v_.is_zero(); }
  bool is_negative() const { return v_ < 0; }

  Rational abs() const { return v_ < 0 ? Rational(Backend(-v_)) : *this; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(Backend(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  const Backend& raw() const { return v_; }

 private:
  Backend v_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace fms
