#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eca {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Longest decimal fraction accepted by parse_rational.
inline constexpr std::size_t kMaxDecimalDigits = 9;

/// Parses "n", "n/d" or a decimal "i.f" (at most nine fractional digits)
/// into an exact rational. Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) {
    throw std::invalid_argument("invalid rational '" + std::string(text) + "': " + why);
  };
  if (text.empty()) fail("empty");

  bool negative = false;
  std::string_view rest = text;
  if (rest.front() == '-' || rest.front() == '+') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  Rational value;
  if (auto slash = rest.find('/'); slash != std::string_view::npos) {
    auto num = rest.substr(0, slash);
    auto den = rest.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) fail("expected n/d");
    BigInt d{std::string(den)};
    if (d == 0) fail("zero denominator");
    value = Rational(BigInt(std::string(num)), d);
  } else if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    auto whole = rest.substr(0, dot);
    auto frac = rest.substr(dot + 1);
    if (!digits_only(whole) || !digits_only(frac)) fail("expected digits.digits");
    if (frac.size() > kMaxDecimalDigits) fail("more than 9 fractional digits");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    value = Rational(BigInt(std::string(whole)) * scale + BigInt(std::string(frac)), scale);
  } else {
    if (!digits_only(rest)) fail("expected digits");
    value = Rational(BigInt(std::string(rest)));
  }
  return negative ? Rational(-value) : value;
}

/// Canonical "n/d" rendering; the denominator is always present.
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// "n" for integers, "n/d" otherwise.
inline std::string to_short_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return to_fraction_string(r);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace unit {
struct Joule {
  static constexpr std::string_view symbol = "J";
};
struct JoulePerSecond {
  static constexpr std::string_view symbol = "J/s";
};
struct Second {
  static constexpr std::string_view symbol = "s";
};
}  // namespace unit

/// Exact rational amount tagged with its unit. Only dimensionally meaningful
/// arithmetic is provided: same-unit sums and power * time.
template <class Unit>
class Quantity {
 public:
  Quantity() = default;
  explicit Quantity(Rational value) : value_(std::move(value)) {}

  static Quantity parse(std::string_view text) { return Quantity(parse_rational(text)); }
  static Quantity zero() { return Quantity(); }

  const Rational& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool negative() const { return value_ < 0; }

  Quantity& operator+=(const Quantity& o) {
    value_ += o.value_;
    return *this;
  }
  Quantity& operator-=(const Quantity& o) {
    value_ -= o.value_;
    return *this;
  }
  friend Quantity operator+(Quantity a, const Quantity& b) { return a += b; }
  friend Quantity operator-(Quantity a, const Quantity& b) { return a -= b; }
  friend Quantity operator*(const Quantity& a, const Rational& k) { return Quantity(Rational(a.value_ * k)); }
  friend Quantity operator*(const Rational& k, const Quantity& a) { return a * k; }

  friend bool operator==(const Quantity& a, const Quantity& b) { return a.value_ == b.value_; }
  friend bool operator<(const Quantity& a, const Quantity& b) { return a.value_ < b.value_; }
  friend bool operator>(const Quantity& a, const Quantity& b) { return b < a; }
  friend bool operator<=(const Quantity& a, const Quantity& b) { return !(b < a); }
  friend bool operator>=(const Quantity& a, const Quantity& b) { return !(a < b); }

  std::string fraction() const { return to_fraction_string(value_); }
  std::string str() const { return to_short_string(value_) + " " + std::string(Unit::symbol); }
  double approx() const { return to_double(value_); }

 private:
  Rational value_;
};

using Energy = Quantity<unit::Joule>;
using Power = Quantity<unit::JoulePerSecond>;
using Duration = Quantity<unit::Second>;

inline Energy operator*(const Power& p, const Duration& t) { return Energy(Rational(p.value() * t.value())); }
inline Energy operator*(const Duration& t, const Power& p) { return p * t; }

}  // namespace eca
