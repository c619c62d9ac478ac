#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sigclo/rational.hpp"

using sigclo::Rational;

TEST_CASE("parse_rational accepts integers, decimals and fractions") {
  CHECK(*sigclo::parse_rational("2") == Rational(2));
  CHECK(*sigclo::parse_rational("+7") == Rational(7));
  CHECK(*sigclo::parse_rational("-3") == Rational(-3));
  CHECK(*sigclo::parse_rational("1.95") == Rational(39, 20));
  CHECK(*sigclo::parse_rational("-0.25") == Rational(-1, 4));
  CHECK(*sigclo::parse_rational(".5") == Rational(1, 2));
  CHECK(*sigclo::parse_rational("7/2") == Rational(7, 2));
  CHECK(*sigclo::parse_rational("-7/2") == Rational(-7, 2));
  CHECK(*sigclo::parse_rational("0.3333333333333333333333") ==
        Rational(mpz_class("3333333333333333333333"), mpz_class("10000000000000000000000")));
}

TEST_CASE("parse_rational canonicalizes") {
  const Rational q = *sigclo::parse_rational("14/4");
  CHECK(q.get_num() == 7);
  CHECK(q.get_den() == 2);
  CHECK(sigclo::parse_rational("2.50")->get_den() == 2);
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK(!sigclo::parse_rational(""));
  CHECK(!sigclo::parse_rational("-"));
  CHECK(!sigclo::parse_rational("abc"));
  CHECK(!sigclo::parse_rational("1.2.3"));
  CHECK(!sigclo::parse_rational("1/0"));
  CHECK(!sigclo::parse_rational("1/"));
  CHECK(!sigclo::parse_rational("/2"));
  CHECK(!sigclo::parse_rational("1e3"));
  CHECK(!sigclo::parse_rational("2."));
  CHECK(!sigclo::parse_rational("--1"));
  CHECK(!sigclo::parse_rational("1/-2"));
  CHECK(!sigclo::parse_rational("1 / 2"));
}

TEST_CASE("fraction_string") {
  CHECK(sigclo::fraction_string(Rational(2)) == "2");
  CHECK(sigclo::fraction_string(Rational(39, 20)) == "39/20");
  CHECK(sigclo::fraction_string(Rational(-1, 3)) == "-1/3");
  CHECK(sigclo::fraction_string(Rational(0)) == "0");
}

TEST_CASE("decimal_or_fraction_string uses decimals only when exact") {
  CHECK(sigclo::decimal_or_fraction_string(Rational(2)) == "2");
  CHECK(sigclo::decimal_or_fraction_string(Rational(39, 20)) == "1.95");
  CHECK(sigclo::decimal_or_fraction_string(Rational(5, 4)) == "1.25");
  CHECK(sigclo::decimal_or_fraction_string(Rational(1, 2)) == "0.5");
  CHECK(sigclo::decimal_or_fraction_string(Rational(1, 5)) == "0.2");
  CHECK(sigclo::decimal_or_fraction_string(Rational(-3, 8)) == "-0.375");
  CHECK(sigclo::decimal_or_fraction_string(Rational(1, 3)) == "1/3");
  CHECK(sigclo::decimal_or_fraction_string(Rational(10, 9)) == "10/9");
}

TEST_CASE("parse and format round-trip") {
  for (const char* text : {"2", "1.95", "7/2", "-0.375", "101/100", "3.14159"}) {
    const Rational q = *sigclo::parse_rational(text);
    CHECK(*sigclo::parse_rational(sigclo::fraction_string(q)) == q);
    CHECK(*sigclo::parse_rational(sigclo::decimal_or_fraction_string(q)) == q);
  }
}

TEST_CASE("pow_rational") {
  CHECK(sigclo::pow_rational(Rational(3, 2), 4) == Rational(81, 16));
  CHECK(sigclo::pow_rational(Rational(7, 3), 0) == Rational(1));
  CHECK(sigclo::pow_rational(Rational(-1, 2), 3) == Rational(-1, 8));
  CHECK(sigclo::pow_rational(Rational(10), 9) == Rational(1000000000));
}

TEST_CASE("as_integer_at_least") {
  CHECK(*sigclo::as_integer_at_least(Rational(7), 2) == 7);
  CHECK(*sigclo::as_integer_at_least(Rational(2), 2) == 2);
  CHECK(!sigclo::as_integer_at_least(Rational(7, 2), 1));
  CHECK(!sigclo::as_integer_at_least(Rational(1), 2));
  CHECK(!sigclo::as_integer_at_least(Rational(-4), 1));
}
