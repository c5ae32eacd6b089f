#include "aiknn/scalar.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "aiknn/error.hpp"

namespace aiknn {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

mpz_class pow10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw InvalidInput("not an exact decimal literal: '" + std::string(text) + "'");
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  const std::string_view original = text;
  text = trim(text);
  if (text.empty()) {
    bad_literal(original);
  }

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
      bad_literal(original);
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) {
      throw InvalidInput("zero denominator in '" + std::string(original) + "'");
    }
    Scalar q(negative ? mpz_class(-n) : n, d);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      bad_literal(original);
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) {
      exponent = -exponent;
    }
  }

  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    bad_literal(original);
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    bad_literal(original);
  }

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
  if (negative) {
    mantissa = -mantissa;
  }
  exponent -= static_cast<long>(frac_part.size());

  Scalar q;
  if (exponent >= 0) {
    q = Scalar(mantissa * pow10(static_cast<unsigned long>(exponent)));
  } else {
    q = Scalar(mantissa, pow10(static_cast<unsigned long>(-exponent)));
    q.canonicalize();
  }
  return q;
}

Scalar scalar_from_double(double value) {
  if (!std::isfinite(value)) {
    throw InvalidInput("non-finite value cannot be represented exactly");
  }
  return Scalar(value);
}

double to_double(const Scalar& value) { return value.get_d(); }

std::string to_string(const Scalar& value) { return value.get_str(10); }

int sign_of(const Scalar& value) { return sgn(value); }

}  // namespace aiknn
