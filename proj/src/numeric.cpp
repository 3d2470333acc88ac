#include "rewardsep/numeric.hpp"

#include <charconv>
#include <cctype>

namespace rsep {

NumericMode NumericMode::floating(double tol)
{
  if (!(tol > 0) || !std::isfinite(tol))
    throw MalformedInput("float tolerance must be positive, got " + format_double(tol));
  return {Kind::Float, tol};
}

LimitExceeded::LimitExceeded(std::uint64_t count, std::uint64_t limit)
    : Error("enumeration would produce " + std::to_string(count) + " policies, limit is " +
            std::to_string(limit)),
      count_(count), limit_(limit)
{
}

namespace {

using boost::multiprecision::mpz_int;

mpz_int pow10(unsigned exponent)
{
  mpz_int p = 1;
  for (unsigned i = 0; i < exponent; ++i)
    p *= 10;
  return p;
}

mpz_int parse_digits(std::string_view digits)
{
  // mpz parsing auto-detects the base, so a leading zero would mean octal.
  while (!digits.empty() && digits.front() == '0')
    digits.remove_prefix(1);
  if (digits.empty())
    return 0;
  return mpz_int(std::string(digits));
}

bool all_digits(std::string_view s)
{
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

Rational parse_decimal(std::string_view text, std::string_view original)
{
  auto fail = [&] { return ParseError("not a decimal number: \"" + std::string(original) + "\""); };

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
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
    if (exp_text.empty() || !all_digits(exp_text) || exp_text.size() > 6)
      throw fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative)
      exponent = -exponent;
  }

  std::string_view int_part = text, frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || !all_digits(int_part) || !all_digits(frac_part))
    throw fail();

  mpz_int num = parse_digits(std::string(int_part) + std::string(frac_part));
  exponent -= static_cast<long>(frac_part.size());
  Rational value = exponent >= 0 ? Rational(num * pow10(static_cast<unsigned>(exponent)))
                                 : Rational(num, pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-value) : value;
}

} // namespace

Rational parse_rational(std::string_view text)
{
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty())
    throw ParseError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash), original);
    Rational den = parse_decimal(text.substr(slash + 1), original);
    if (den == 0)
      throw ParseError("zero denominator in \"" + std::string(original) + "\"");
    return num / den;
  }
  return parse_decimal(text, original);
}

std::string format_rational(const Rational &x)
{
  mpz_int num = numerator(x);
  mpz_int den = denominator(x);
  if (den == 1)
    return num.str();

  // den = 2^a 5^b gives a terminating decimal with max(a, b) digits.
  mpz_int rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1)
    return num.str() + "/" + den.str();

  const unsigned digits = std::max(twos, fives);
  const bool negative = num < 0;
  mpz_int scaled = (negative ? mpz_int(-num) : num) * pow10(digits) / den;
  std::string s = scaled.str();
  if (s.size() <= digits)
    s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

std::string format_double(double x)
{
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc())
    return std::to_string(x);
  return std::string(buf, end);
}

} // namespace rsep
