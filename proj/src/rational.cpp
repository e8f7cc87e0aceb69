#include "fms/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace fms {

namespace mp = boost::multiprecision;

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  v_ = Backend(mp::cpp_int(num), mp::cpp_int(den));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  auto scan_digits = [&](mp::cpp_int& out) -> bool {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    out = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      out = out * 10 + (text[i] - '0');
      ++i;
    }
    return true;
  };
  mp::cpp_int num;
  if (!scan_digits(num)) return std::nullopt;
  mp::cpp_int den = 1;
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!scan_digits(den)) return std::nullopt;  // rejects "3/-2" and "3/"
    if (den == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;  // trailing garbage
  if (negative) num = -num;
  return Rational(Backend(num, den));
}

std::string Rational::str() const {
  const mp::cpp_int num = mp::numerator(v_);
  const mp::cpp_int den = mp::denominator(v_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

boost::multiprecision::cpp_int Rational::numerator() const { return mp::numerator(v_); }
boost::multiprecision::cpp_int Rational::denominator() const { return mp::denominator(v_); }

}  // namespace fms
