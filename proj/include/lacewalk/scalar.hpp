#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lacewalk {

using Rational = mpq_class;

enum class Arithmetic { Float, Rational };

/// Parses "p/q", an integer, or a decimal literal ("0.02", "-1.5e-3") into
/// an exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Exact value of a binary double as a rational.
Rational exact_rational(double value);

/// Nearest double to q, ties to even (mpq_get_d truncates instead).
double to_double(const Rational& q);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double from_rational(const Rational& q) { return lacewalk::to_double(q); }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& x) { return lacewalk::to_double(x); }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
};

/// Running sum. The double specialization is Neumaier's variant of
/// compensated summation; the rational one is exact.
template <class S>
class CompensatedSum;

template <>
class CompensatedSum<double> {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <>
class CompensatedSum<Rational> {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(const Rational& v) : sum_(v) {}

  CompensatedSum& operator+=(const Rational& x) {
    sum_ += x;
    return *this;
  }
  CompensatedSum& operator+=(const CompensatedSum& other) {
    sum_ += other.sum_;
    return *this;
  }

  const Rational& value() const { return sum_; }

 private:
  Rational sum_ = 0;
};

/// Inequality verdict lhs <= rhs: exact for rationals, relative 1e-12 of
/// |rhs| for doubles.
inline bool holds_le(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * std::fabs(rhs);
}
inline bool holds_le(const Rational& lhs, const Rational& rhs) { return lhs <= rhs; }

}  // namespace lacewalk
