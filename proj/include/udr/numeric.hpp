#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace udr {

using Rational = boost::multiprecision::cpp_rational;

/// Arithmetic mode carried by every geometric container. Exact mode admits no
/// rounding anywhere; float mode carries a comparison tolerance.
enum class NumericMode { Exact, Float };

constexpr double kDefaultTol = 1e-9;

enum class Errc {
  ModeMismatch,
  DegenerateAnchor,
  DuplicatePoints,
  InfeasibleBudget,
  SearchFailure,
  UnstableCells,
  GraphMismatch,
  InvalidInput,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const;

 private:
  Errc code_;
};

const char* errc_name(Errc code);

/// Scalar quantity: exact rational or binary64, tagged with its mode.
/// Mixed-mode arithmetic throws Errc::ModeMismatch.
class Scalar {
 public:
  Scalar() : mode_(NumericMode::Exact), rat_(0), dbl_(0.0) {}
  explicit Scalar(Rational v) : mode_(NumericMode::Exact), rat_(std::move(v)), dbl_(0.0) {}
  explicit Scalar(double v) : mode_(NumericMode::Float), rat_(0), dbl_(v) {}

  static Scalar from_int(long long v, NumericMode mode) {
    return mode == NumericMode::Exact ? Scalar(Rational(v)) : Scalar(static_cast<double>(v));
  }

  NumericMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == NumericMode::Exact; }

  const Rational& rat() const {
    if (!is_exact()) throw Error(Errc::ModeMismatch, "rational value requested from float scalar");
    return rat_;
  }
  double dbl() const {
    if (is_exact()) throw Error(Errc::ModeMismatch, "double value requested from exact scalar");
    return dbl_;
  }
  /// Value as double in either mode (rounded in exact mode).
  double approx() const { return is_exact() ? static_cast<double>(rat_) : dbl_; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    check(a, b);
    return a.is_exact() ? Scalar(Rational(a.rat_ + b.rat_)) : Scalar(a.dbl_ + b.dbl_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    check(a, b);
    return a.is_exact() ? Scalar(Rational(a.rat_ - b.rat_)) : Scalar(a.dbl_ - b.dbl_);
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    check(a, b);
    return a.is_exact() ? Scalar(Rational(a.rat_ * b.rat_)) : Scalar(a.dbl_ * b.dbl_);
  }
  Scalar operator-() const { return is_exact() ? Scalar(Rational(-rat_)) : Scalar(-dbl_); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    check(a, b);
    return a.is_exact() ? a.rat_ == b.rat_ : a.dbl_ == b.dbl_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    check(a, b);
    return a.is_exact() ? a.rat_ < b.rat_ : a.dbl_ < b.dbl_;
  }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return a < b || a == b; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return b <= a; }

  int sign() const {
    if (is_exact()) return rat_.sign();
    return dbl_ > 0.0 ? 1 : (dbl_ < 0.0 ? -1 : 0);
  }

  /// Parses "5/4" (rational) or "1.25" (decimal). Decimal text is converted
  /// exactly in exact mode (decimals are dyadic-scaled rationals).
  static Scalar parse(std::string_view text, NumericMode mode);
  /// Text form: rational "p/q" (or plain integer) in exact mode, shortest
  /// round-trip decimal in float mode.
  std::string str() const;

 private:
  static void check(const Scalar& a, const Scalar& b) {
    if (a.mode_ != b.mode_) throw Error(Errc::ModeMismatch, "mixed-mode scalar arithmetic");
  }

  NumericMode mode_;
  Rational rat_;
  double dbl_;
};

/// True iff v = a^2 + b^2 for nonnegative integers a, b.
bool is_sum_of_two_squares(long long v);

/// Exact square root when the rational is a perfect square; returns false otherwise.
bool exact_sqrt(const Rational& v, Rational& out);

std::string format_double(double v);

}  // namespace udr
