#include <doctest.h>

#include "rewardsep/numeric.hpp"

using rsep::Rational;
using rsep::format_rational;
using rsep::parse_rational;

TEST_CASE("decimal strings parse exactly")
{
  CHECK(parse_rational("0.9") == Rational(9) / 10);
  CHECK(parse_rational("-8") == Rational(-8));
  CHECK(parse_rational("1.5e-3") == Rational(3) / 2000);
  CHECK(parse_rational("2E2") == Rational(200));
  CHECK(parse_rational(" 100/19 ") == Rational(100) / 19);
  CHECK(parse_rational("0.5/3") == Rational(1) / 6);
  CHECK(parse_rational("007") == Rational(7));
  CHECK(parse_rational(".25") == Rational(1) / 4);
}

TEST_CASE("malformed numbers are rejected")
{
  for (const char *bad : {"", "abc", "1.2.3", "1/0", "--1", "1e", "0x10", "1/"})
    CHECK_THROWS_AS(parse_rational(bad), rsep::ParseError);
}

TEST_CASE("formatting round-trips")
{
  CHECK(format_rational(Rational(9) / 10) == "0.9");
  CHECK(format_rational(Rational(-1) / 8) == "-0.125");
  CHECK(format_rational(Rational(100) / 19) == "100/19");
  CHECK(format_rational(Rational(-3)) == "-3");
  CHECK(format_rational(Rational(1) / 200) == "0.005");
  for (const char *text : {"0.9", "-0.125", "100/19", "-45/19", "12", "0.0001"})
    CHECK(parse_rational(format_rational(parse_rational(text))) == parse_rational(text));
}

TEST_CASE("float tolerance must be positive")
{
  CHECK_THROWS_AS(rsep::NumericMode::floating(0), rsep::MalformedInput);
  CHECK_THROWS_AS(rsep::NumericMode::floating(-1e-9), rsep::MalformedInput);
  CHECK(rsep::NumericMode::floating(1e-6).tol().eps == 1e-6);
  CHECK(rsep::NumericMode::exact().is_exact());
}

TEST_CASE("tolerant comparisons apply only to doubles")
{
  CHECK(rsep::is_zero(1e-12));
  CHECK_FALSE(rsep::is_zero(Rational(1) / 1000000000000));
  CHECK(rsep::is_positive(Rational(1) / 1000000000000));
}
