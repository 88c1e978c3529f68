#include <doctest.h>

#include <streamseal/decimal.hpp>
#include <streamseal/errors.hpp>

using namespace streamseal;

namespace {

std::string mean_of(std::initializer_list<const char*> values, std::int64_t count) {
  Decimal sum;
  for (const char* v : values) {
    sum = add(sum, parse_decimal(v));
  }
  return render_mean(sum, count);
}

}  // namespace

TEST_CASE("parse handles signs, fractions, exponents") {
  auto a = parse_decimal("21");
  CHECK(a.units == 21);
  CHECK(a.scale == 0);

  auto b = parse_decimal("-3.5");
  CHECK(b.units == -35);
  CHECK(b.scale == 1);

  auto c = parse_decimal("1.5e+2");
  CHECK(c.units == 150);
  CHECK(c.scale == 0);

  auto d = parse_decimal("1e-7");
  CHECK(d.units == 1);
  CHECK(d.scale == 7);

  auto e = parse_decimal("2.5e-1");
  CHECK(e.units == 25);
  CHECK(e.scale == 2);

  auto f = parse_decimal("+0.25");
  CHECK(f.units == 25);
  CHECK(f.scale == 2);
}

TEST_CASE("parse rejects non-numbers") {
  CHECK_THROWS_AS(parse_decimal(""), ParseError);
  CHECK_THROWS_AS(parse_decimal("abc"), ParseError);
  CHECK_THROWS_AS(parse_decimal("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_decimal("1e"), ParseError);
  CHECK_THROWS_AS(parse_decimal("."), ParseError);
  CHECK_THROWS_AS(parse_decimal("12 "), ParseError);
}

TEST_CASE("addition aligns scales exactly") {
  auto sum = add(parse_decimal("0.1"), parse_decimal("0.2"));
  CHECK(sum.units == 3);
  CHECK(sum.scale == 1);

  auto mixed = add(parse_decimal("1"), parse_decimal("0.005"));
  CHECK(mixed.units == 1005);
  CHECK(mixed.scale == 3);
}

TEST_CASE("fixture mean renders as a trimmed decimal") {
  // (19.8 + 22.4 + 20.8) / 3 = 21.0 renders "21"
  CHECK(mean_of({"19.8", "22.4", "20.8"}, 3) == "21");
}

TEST_CASE("mean rounds half to even at the hundredths") {
  CHECK(mean_of({"0.125"}, 1) == "0.12");   // tie, even neighbor below
  CHECK(mean_of({"0.135"}, 1) == "0.14");   // tie, even neighbor above
  CHECK(mean_of({"0.1251"}, 1) == "0.13");  // beyond tie rounds up
  CHECK(mean_of({"1", "2"}, 2) == "1.5");
  CHECK(mean_of({"1", "0"}, 3) == "0.33");
  CHECK(mean_of({"2", "0"}, 3) == "0.67");
}

TEST_CASE("negative means round half to even on magnitude") {
  CHECK(mean_of({"-0.125"}, 1) == "-0.12");
  CHECK(mean_of({"-0.135"}, 1) == "-0.14");
  CHECK(mean_of({"-19.8", "-22.4", "-20.8"}, 3) == "-21");
}

TEST_CASE("trailing zeros are trimmed but cents survive") {
  CHECK(mean_of({"5"}, 2) == "2.5");
  CHECK(mean_of({"21"}, 1) == "21");
  CHECK(mean_of({"0.10"}, 1) == "0.1");
  CHECK(mean_of({"0"}, 5) == "0");
  CHECK(mean_of({"10.01"}, 1) == "10.01");
}

TEST_CASE("whole averages of small windows") {
  CHECK(mean_of({"20.5", "21.5"}, 2) == "21");
  CHECK(mean_of({"-1", "1"}, 2) == "0");
}
