#include "udr/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace udr {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ModeMismatch: return "mode-mismatch";
    case Errc::DegenerateAnchor: return "degenerate-anchor";
    case Errc::DuplicatePoints: return "duplicate-points";
    case Errc::InfeasibleBudget: return "infeasible-budget";
    case Errc::SearchFailure: return "search-failure";
    case Errc::UnstableCells: return "unstable-cells";
    case Errc::GraphMismatch: return "graph-mismatch";
    case Errc::InvalidInput: return "invalid-input";
    case Errc::Io: return "io";
  }
  return "unknown";
}

const char* Error::code_name() const { return errc_name(code_); }

namespace {

Rational parse_decimal(std::string_view text) {
  // [sign] digits [. digits] [e[sign]digits]
  std::string s(text);
  std::size_t epos = s.find_first_of("eE");
  long long exp10 = 0;
  if (epos != std::string::npos) {
    exp10 = std::stoll(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  std::size_t dot = s.find('.');
  std::string digits = s;
  long long frac_len = 0;
  if (dot != std::string::npos) {
    frac_len = static_cast<long long>(s.size() - dot - 1);
    digits = s.substr(0, dot) + s.substr(dot + 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw Error(Errc::InvalidInput, "bad scalar literal: " + std::string(text));
  boost::multiprecision::cpp_int num(digits);
  boost::multiprecision::cpp_int den = 1;
  long long shift = exp10 - frac_len;
  boost::multiprecision::cpp_int ten = 10;
  for (long long i = 0; i < std::llabs(shift); ++i) {
    if (shift > 0)
      num *= ten;
    else
      den *= ten;
  }
  return Rational(num, den);
}

}  // namespace

Scalar Scalar::parse(std::string_view text, NumericMode mode) {
  if (text.empty()) throw Error(Errc::InvalidInput, "empty scalar literal");
  if (mode == NumericMode::Float) {
    double v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec == std::errc() && res.ptr == text.data() + text.size()) return Scalar(v);
    // rational text in float mode
    std::size_t slash = text.find('/');
    if (slash != std::string_view::npos) {
      Rational r = parse_decimal(text.substr(0, slash)) / parse_decimal(text.substr(slash + 1));
      return Scalar(static_cast<double>(r));
    }
    throw Error(Errc::InvalidInput, "bad scalar literal: " + std::string(text));
  }
  std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::InvalidInput, "zero denominator: " + std::string(text));
    return Scalar(Rational(parse_decimal(text.substr(0, slash)) / den));
  }
  return Scalar(parse_decimal(text));
}

std::string format_double(double v) {
  char buf[64];
  // shortest representation that round-trips
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

std::string Scalar::str() const {
  if (is_exact()) {
    if (denominator(rat_) == 1) return numerator(rat_).str();
    return numerator(rat_).str() + "/" + denominator(rat_).str();
  }
  return format_double(dbl_);
}

bool is_sum_of_two_squares(long long v) {
  if (v < 0) return false;
  for (long long a = 0; a * a * 2 <= v; ++a) {
    long long rem = v - a * a;
    long long b = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(rem))));
    for (long long bb = std::max<long long>(0, b - 1); bb <= b + 1; ++bb)
      if (bb * bb == rem) return true;
  }
  return false;
}

bool exact_sqrt(const Rational& v, Rational& out) {
  using boost::multiprecision::cpp_int;
  if (v < 0) return false;
  cpp_int num = numerator(v), den = denominator(v);
  cpp_int sn = sqrt(num), sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  out = Rational(sn, sd);
  return true;
}

}  // namespace udr
