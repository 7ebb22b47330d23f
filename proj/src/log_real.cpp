#include "nodal/log_real.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLnThreshold = std::log(LogReal::kDeepThreshold);

double logaddexp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

LogReal LogReal::normalized_shallow(double ln_v) {
  if (std::isnan(ln_v)) throw NumericalError("LogReal: NaN log");
  if (ln_v == -kInf) return {};
  if (ln_v > kDeepThreshold) throw NumericalError("LogReal: overflow above exp(1e300)");
  if (ln_v < -kDeepThreshold) return {Tier::deep, std::log(-ln_v)};
  return {Tier::shallow, ln_v};
}

LogReal LogReal::normalized_deep(double ll) {
  if (std::isnan(ll)) throw NumericalError("LogReal: NaN loglog");
  if (ll == kInf) return {};
  if (ll <= kLnThreshold) return normalized_shallow(-std::exp(ll));
  return {Tier::deep, ll};
}

LogReal LogReal::from_value(double v) {
  if (!(v >= 0.0)) throw PreconditionError("LogReal: negative or NaN value");
  if (v == 0.0) return {};
  return normalized_shallow(std::log(v));
}

LogReal LogReal::from_log(double ln_v) { return normalized_shallow(ln_v); }

LogReal LogReal::from_neg_loglog(double ll) { return normalized_deep(ll); }

LogReal LogReal::exp_neg(const LogReal& x) {
  switch (x.tier_) {
    case Tier::zero: return one();
    case Tier::deep: return one();  // exp(-tiny)
    case Tier::shallow:
      if (x.x_ > kLnThreshold) return normalized_deep(x.x_);
      return normalized_shallow(-std::exp(x.x_));
  }
  return {};
}

double LogReal::log() const {
  switch (tier_) {
    case Tier::zero: return -kInf;
    case Tier::shallow: return x_;
    case Tier::deep: return -std::exp(x_);
  }
  return 0.0;
}

double LogReal::log10() const { return log() / std::log(10.0); }

double LogReal::value() const { return std::exp(log()); }

double LogReal::neg_loglog() const {
  if (tier_ == Tier::deep) return x_;
  if (tier_ == Tier::zero) return kInf;
  if (x_ >= 0.0) throw PreconditionError("LogReal::neg_loglog needs a value below 1");
  return std::log(-x_);
}

double LogReal::deep_ll() const {
  if (tier_ != Tier::deep) throw PreconditionError("LogReal::deep_ll on a shallow value");
  return x_;
}

LogReal LogReal::pow(double p) const {
  if (std::isnan(p)) throw PreconditionError("LogReal::pow NaN exponent");
  if (p == 0.0) return one();
  switch (tier_) {
    case Tier::zero:
      if (p < 0) throw NumericalError("LogReal: zero to a negative power");
      return {};
    case Tier::shallow: return normalized_shallow(p * x_);
    case Tier::deep:
      if (p < 0) throw NumericalError("LogReal: reciprocal of a deep value overflows");
      return normalized_deep(x_ + std::log(p));
  }
  return {};
}

LogReal operator*(const LogReal& a, const LogReal& b) {
  using T = LogReal::Tier;
  if (a.tier_ == T::zero || b.tier_ == T::zero) return {};
  if (a.tier_ == T::shallow && b.tier_ == T::shallow) return LogReal::normalized_shallow(a.x_ + b.x_);
  if (a.tier_ == T::deep && b.tier_ == T::deep) return LogReal::normalized_deep(logaddexp(a.x_, b.x_));
  const LogReal& d = a.tier_ == T::deep ? a : b;
  const LogReal& s = a.tier_ == T::deep ? b : a;
  // -ln(v w) = e^ll - s = e^ll (1 - s e^-ll), |s e^-ll| < 1
  return LogReal::normalized_deep(d.x_ + std::log1p(-s.x_ * std::exp(-d.x_)));
}

LogReal operator/(const LogReal& a, const LogReal& b) {
  if (b.is_zero()) throw NumericalError("LogReal: division by zero");
  return a * b.pow(-1.0);
}

LogReal operator+(const LogReal& a, const LogReal& b) {
  using T = LogReal::Tier;
  if (a.tier_ == T::zero) return b;
  if (b.tier_ == T::zero) return a;
  if (a.tier_ == T::shallow && b.tier_ == T::shallow)
    return LogReal::normalized_shallow(logaddexp(a.x_, b.x_));
  if (a.tier_ == T::shallow) return a;
  if (b.tier_ == T::shallow) return b;
  // both deep: the larger value (smaller ll) dominates beyond double precision
  return a.x_ <= b.x_ ? a : b;
}

std::partial_ordering operator<=>(const LogReal& a, const LogReal& b) {
  using T = LogReal::Tier;
  auto rank = [](T t) { return t == T::zero ? 0 : t == T::deep ? 1 : 2; };
  if (a.tier_ != b.tier_) return rank(a.tier_) <=> rank(b.tier_);
  if (a.tier_ == T::zero) return std::partial_ordering::equivalent;
  if (a.tier_ == T::deep) return b.x_ <=> a.x_;
  return a.x_ <=> b.x_;
}

bool operator==(const LogReal& a, const LogReal& b) {
  return a.tier_ == b.tier_ && (a.tier_ == LogReal::Tier::zero || a.x_ == b.x_);
}

std::string LogReal::str() const {
  std::ostringstream os;
  os.precision(10);
  switch (tier_) {
    case Tier::zero: os << "0"; break;
    case Tier::shallow:
      if (std::abs(x_) < 300) os << std::exp(x_);
      else os << "10^" << log10();
      break;
    case Tier::deep: os << "10^-(10^" << (x_ - std::log(std::log(10.0))) / std::log(10.0) << ")"; break;
  }
  return os.str();
}

}  // namespace nodal
