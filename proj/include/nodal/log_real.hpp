#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace nodal {

// Nonnegative real kept in log form.
//
// Two tiers: "shallow" stores ln v directly. Once -ln v exceeds
// kDeepThreshold the log itself no longer fits a double, so the value
// switches to "deep" and stores ll with v = exp(-exp(ll)).  Only tiny
// values go deep; huge ones throw on overflow.
class LogReal {
 public:
  static constexpr double kDeepThreshold = 1e300;

  LogReal() = default;  // zero

  static LogReal zero() { return {}; }
  static LogReal one() { return from_log(0.0); }
  static LogReal from_value(double v);
  static LogReal from_log(double ln_v);
  // v = exp(-exp(ll))
  static LogReal from_neg_loglog(double ll);
  // exp(-x) for a nonnegative magnitude x
  static LogReal exp_neg(const LogReal& x);

  bool is_zero() const { return tier_ == Tier::zero; }
  bool is_deep() const { return tier_ == Tier::deep; }

  // ln v; -inf for zero; for deep values -exp(ll), which may be -inf
  double log() const;
  double log10() const;
  double value() const;
  // ln(-ln v), only for 0 < v < 1
  double neg_loglog() const;
  // deep tier payload (ll); throws for other tiers
  double deep_ll() const;

  LogReal pow(double p) const;
  LogReal sqrt() const { return pow(0.5); }

  friend LogReal operator*(const LogReal& a, const LogReal& b);
  friend LogReal operator/(const LogReal& a, const LogReal& b);
  friend LogReal operator+(const LogReal& a, const LogReal& b);
  LogReal& operator*=(const LogReal& o) { return *this = *this * o; }
  LogReal& operator/=(const LogReal& o) { return *this = *this / o; }
  LogReal& operator+=(const LogReal& o) { return *this = *this + o; }

  friend std::partial_ordering operator<=>(const LogReal& a, const LogReal& b);
  friend bool operator==(const LogReal& a, const LogReal& b);

  std::string str() const;

 private:
  enum class Tier : std::uint8_t { zero, shallow, deep };
  LogReal(Tier t, double x) : tier_(t), x_(x) {}
  static LogReal normalized_shallow(double ln_v);
  static LogReal normalized_deep(double ll);

  Tier tier_ = Tier::zero;
  double x_ = 0.0;
};

}  // namespace nodal
