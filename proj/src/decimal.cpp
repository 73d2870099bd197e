#include "sqrtsum/decimal.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace sqrtsum {

namespace {

[[noreturn]] void parse_fail(const std::string& text, std::size_t pos,
                             const char* what) {
  throw std::invalid_argument("invalid decimal '" + text + "' at position " +
                              std::to_string(pos) + ": " + what);
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// Decimal exponent e with 10^e <= |q| < 10^(e+1); q != 0.
long decimal_exponent(const mpq_class& q) {
  const mpz_class num = abs(q.get_num());
  const mpz_class& den = q.get_den();
  // sizeinbase(10) overestimates by at most one digit; correct by comparison.
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  auto less_than_pow = [&](long x) {
    // |q| < 10^x ?
    if (x >= 0) {
      return num < den * pow10(static_cast<unsigned long>(x));
    }
    return num * pow10(static_cast<unsigned long>(-x)) < den;
  };
  while (less_than_pow(e)) {
    --e;
  }
  while (!less_than_pow(e + 1)) {
    ++e;
  }
  return e;
}

std::string render(bool negative, std::string digits, long e, int sig) {
  // strip trailing zeros but keep at least one digit
  while (digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
  }
  std::string out;
  if (negative) {
    out += '-';
  }
  if (e >= -4 && e < sig) {
    if (e >= 0) {
      const std::size_t ip = static_cast<std::size_t>(e) + 1;
      while (digits.size() < ip) {
        digits += '0';
      }
      out += digits.substr(0, ip);
      if (digits.size() > ip) {
        out += '.';
        out += digits.substr(ip);
      }
    } else {
      out += "0.";
      out += std::string(static_cast<std::size_t>(-e - 1), '0');
      out += digits;
    }
  } else {
    out += digits.substr(0, 1);
    if (digits.size() > 1) {
      out += '.';
      out += digits.substr(1);
    }
    out += 'e';
    if (e >= 0) {
      out += '+';
    }
    out += std::to_string(e);
  }
  return out;
}

std::string format_impl(const mpq_class& q, int sig, bool round_up) {
  if (sig < 1) {
    throw std::invalid_argument("format_decimal: need >= 1 digit");
  }
  if (q == 0) {
    return "0";
  }
  const bool negative = q < 0;
  const mpz_class num = abs(q.get_num());
  const mpz_class& den = q.get_den();
  long e = decimal_exponent(q);
  // D = |q| * 10^(sig-1-e) rounded; D has exactly sig digits unless the
  // rounding carries, which bumps the exponent.
  const long shift = sig - 1 - e;
  mpz_class n2 = num;
  mpz_class d2 = den;
  if (shift >= 0) {
    n2 *= pow10(static_cast<unsigned long>(shift));
  } else {
    d2 *= pow10(static_cast<unsigned long>(-shift));
  }
  mpz_class digits_z;
  if (round_up) {
    mpz_cdiv_q(digits_z.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  } else {
    // round half up in magnitude: floor((2n + d) / 2d)
    mpz_class t = 2 * n2 + d2;
    mpz_class dd = 2 * d2;
    mpz_fdiv_q(digits_z.get_mpz_t(), t.get_mpz_t(), dd.get_mpz_t());
  }
  if (digits_z >= pow10(static_cast<unsigned long>(sig))) {
    digits_z = digits_z / 10;  // carry: 999.. rounded to 1000..
    ++e;
  }
  return render(negative, digits_z.get_str(), e, sig);
}

}  // namespace

mpq_class parse_decimal(const std::string& text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto at_end = [&] { return i >= n; };
  if (at_end()) {
    parse_fail(text, 0, "empty");
  }
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string int_part, frac_part;
  while (!at_end() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    int_part += text[i++];
  }
  if (!at_end() && text[i] == '.') {
    ++i;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      frac_part += text[i++];
    }
  }
  if (int_part.empty() && frac_part.empty()) {
    parse_fail(text, i, "expected digits");
  }
  long exp10 = 0;
  if (!at_end() && (text[i] == 'e' || text[i] == 'E')) {
    const std::size_t exp_pos = ++i;
    bool exp_neg = false;
    if (!at_end() && (text[i] == '+' || text[i] == '-')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    std::string exp_digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exp_digits += text[i++];
    }
    if (exp_digits.empty()) {
      parse_fail(text, exp_pos, "expected exponent digits");
    }
    if (exp_digits.size() > 6) {
      parse_fail(text, exp_pos, "exponent out of range");
    }
    exp10 = std::strtol(exp_digits.c_str(), nullptr, 10);
    if (exp_neg) {
      exp10 = -exp10;
    }
  }
  if (!at_end()) {
    parse_fail(text, i, "trailing characters");
  }

  mpz_class mantissa(int_part.empty() ? "0" : int_part);
  for (char c : frac_part) {
    mantissa = mantissa * 10 + (c - '0');
  }
  const long net_exp = exp10 - static_cast<long>(frac_part.size());
  mpq_class q(mantissa);
  if (net_exp >= 0) {
    q *= mpq_class(pow10(static_cast<unsigned long>(net_exp)));
  } else {
    q /= mpq_class(pow10(static_cast<unsigned long>(-net_exp)));
  }
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

std::string format_decimal(const mpq_class& q, int significant_digits) {
  return format_impl(q, significant_digits, /*round_up=*/false);
}

std::string format_decimal_magnitude_up(const mpq_class& q,
                                        int significant_digits) {
  return format_impl(q, significant_digits, /*round_up=*/true);
}

}  // namespace sqrtsum
