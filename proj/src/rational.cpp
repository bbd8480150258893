#include "heisenclone/rational.hpp"

#include <cctype>
#include <charconv>
#include <numeric>

#include "heisenclone/error.hpp"

namespace heisenclone {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::string_view text) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw ParseError("energy '" + std::string(text) + "' overflows the exact rational range");
  return out;
}

std::int64_t parse_int(std::string_view digits, std::string_view text) {
  if (digits.empty()) throw ParseError("energy '" + std::string(text) + "' is not a rational number");
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec == std::errc::result_out_of_range)
    throw ParseError("energy '" + std::string(text) + "' overflows the exact rational range");
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw ParseError("energy '" + std::string(text) + "' is not a rational number");
  return v;
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ParseError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ParseError("energy '" + std::string(text) + "' is not a rational number");

  std::int64_t num = 0;
  std::int64_t den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto p = s.substr(0, slash);
    auto q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw ParseError("energy '" + std::string(text) + "' is not a rational number");
    num = parse_int(p, text);
    den = parse_int(q, text);
    if (den == 0) throw ParseError("energy '" + std::string(text) + "' has a zero denominator");
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac))
      throw ParseError("energy '" + std::string(text) + "' is not a rational number");
    if (frac.size() > 18) throw ParseError("energy '" + std::string(text) + "' has too many decimals");
    num = whole.empty() ? 0 : parse_int(whole, text);
    for (std::size_t i = 0; i < frac.size(); ++i) den = checked_mul(den, 10, text);
    num = checked_mul(num, den, text);
    if (!frac.empty()) {
      std::int64_t f = parse_int(frac, text);
      if (__builtin_add_overflow(num, f, &num))
        throw ParseError("energy '" + std::string(text) + "' overflows the exact rational range");
    }
  } else {
    if (!all_digits(s)) throw ParseError("energy '" + std::string(text) + "' is not a rational number");
    num = parse_int(s, text);
  }
  return Rational(negative ? -num : num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

}  // namespace heisenclone
