#include <algorithm>
#include <random>

#include "doctest.h"
#include "fracstab/errors.hpp"
#include "fracstab/number_format.hpp"
#include "fracstab/order.hpp"
#include "fracstab/quasi_polynomial.hpp"
#include "fracstab/system_io.hpp"
#include "support.hpp"

using namespace fracstab;

TEST_CASE("FracOrder reduces to lowest terms") {
  FracOrder o(50, 100);
  CHECK(o.num() == 1);
  CHECK(o.den() == 2);
  CHECK_THROWS_AS(FracOrder(6, -4), ValidationError);
  CHECK(FracOrder(-6, -4) == FracOrder(3, 2));
  CHECK(FracOrder(0, 7) == FracOrder(0, 1));
  CHECK(FracOrder(0, 7).den() == 1);
}

TEST_CASE("FracOrder rejects invalid values") {
  CHECK_THROWS_AS(FracOrder(1, 0), ValidationError);
  CHECK_THROWS_AS(FracOrder(-1, 2), ValidationError);
  CHECK_THROWS_AS(FracOrder(1, 1001), ValidationError);
  CHECK_NOTHROW(FracOrder(1, 1000));
  CHECK_NOTHROW(FracOrder(2, 2000));  // reduces to 1/1000
  CHECK_THROWS_AS(FracOrder(100, 1), ValidationError);
  CHECK_NOTHROW(FracOrder(99999, 1000));
}

TEST_CASE("FracOrder parses decimals exactly") {
  CHECK(FracOrder::parse("0.5") == FracOrder(1, 2));
  CHECK(FracOrder::parse("1.31") == FracOrder(131, 100));
  CHECK(FracOrder::parse("0.97") == FracOrder(97, 100));
  CHECK(FracOrder::parse("0.010") == FracOrder(1, 100));
  CHECK(FracOrder::parse("2") == FracOrder(2, 1));
  CHECK(FracOrder::parse(".25") == FracOrder(1, 4));
  CHECK(FracOrder::parse("3.") == FracOrder(3, 1));
  CHECK(FracOrder::parse("1/3") == FracOrder(1, 3));
  CHECK(FracOrder::parse(" 2/4 ") == FracOrder(1, 2));
  CHECK(FracOrder::parse("+0.5") == FracOrder(1, 2));
  for (const char* bad : {"", ".", "-0.5", "1e-2", "abc", "1/", "/2", "0.5.5", "1/0", "0.0001", "100", "1234567890123456"})
    CHECK_THROWS_AS(FracOrder::parse(bad), ValidationError);
}

TEST_CASE("FracOrder prints terminating decimals and fractions") {
  CHECK(FracOrder(1, 2).to_string() == "0.5");
  CHECK(FracOrder(131, 100).to_string() == "1.31");
  CHECK(FracOrder(1, 100).to_string() == "0.01");
  CHECK(FracOrder(1, 8).to_string() == "0.125");
  CHECK(FracOrder(3, 1).to_string() == "3");
  CHECK(FracOrder(0, 1).to_string() == "0");
  CHECK(FracOrder(1, 3).to_string() == "1/3");
  CHECK(FracOrder(7, 6).to_string() == "7/6");
}

TEST_CASE("FracOrder parse/print round trip over all small fractions") {
  for (std::int64_t den = 1; den <= 60; ++den)
    for (std::int64_t num = 0; num <= 3 * den; ++num) {
      const FracOrder o(num, den);
      CHECK(FracOrder::parse(o.to_string()) == o);
    }
}

TEST_CASE("FracOrder ordering and arithmetic") {
  CHECK(FracOrder(1, 3) < FracOrder(1, 2));
  CHECK(FracOrder(97, 100) < FracOrder(1, 1));
  CHECK(FracOrder(1, 3) + FracOrder(1, 6) == FracOrder(1, 2));
  CHECK(FracOrder(1, 2) - FracOrder(1, 3) == FracOrder(1, 6));
  CHECK(FracOrder(1, 3) * 3 == FracOrder(1, 1));
  CHECK_THROWS_AS(FracOrder(1, 3) - FracOrder(1, 2), ValidationError);
  CHECK(FracOrder(3, 1).is_integer());
  CHECK(FracOrder(0, 1).is_zero());
  CHECK(FracOrder(3, 4).value() == doctest::Approx(0.75));
}

TEST_CASE("format_double prints shortest round-trip text") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-7) == "1e-07");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exp(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, exp(rng)) * (i % 2 ? -1 : 1);
    CHECK(parse_double(format_double(v)) == v);
  }
}

TEST_CASE("parse_double is strict") {
  CHECK(parse_double("1.5") == 1.5);
  CHECK(parse_double("+2") == 2.0);
  CHECK(parse_double("-3e2") == -300.0);
  CHECK_FALSE(parse_double("").has_value());
  CHECK_FALSE(parse_double("1.5x").has_value());
  CHECK_FALSE(parse_double(" 1").has_value());
  CHECK_FALSE(parse_double("+").has_value());
}

TEST_CASE("QuasiPolynomial canonical form") {
  const auto k = [](double v) { return Coefficient::known(v); };
  QuasiPolynomial qp({{k(2), FracOrder(1, 2)}, {k(1), FracOrder(0, 1)}, {k(3), FracOrder(1, 2)}, {k(0), FracOrder(3, 1)}});
  REQUIRE(qp.size() == 2);
  CHECK(qp.terms()[0].order == FracOrder(0, 1));
  CHECK(qp.terms()[1].coeff.value() == 5.0);
  CHECK(qp.degree() == FracOrder(1, 2));

  CHECK_THROWS_AS(QuasiPolynomial({{k(0), FracOrder(1, 1)}}), ValidationError);
  CHECK_THROWS_AS(QuasiPolynomial({}), ValidationError);
  CHECK_THROWS_AS(QuasiPolynomial({{Coefficient::unknown("a"), FracOrder(1, 1)}, {k(1), FracOrder(1, 1)}}),
                  ValidationError);
  CHECK_THROWS_AS(
      QuasiPolynomial({{Coefficient::unknown("a"), FracOrder(1, 1)}, {Coefficient::unknown("a"), FracOrder(0, 1)}}),
      ValidationError);
  CHECK_THROWS_AS(QuasiPolynomial({{Coefficient::unknown("a", 0.0), FracOrder(1, 1)}}), ValidationError);
  CHECK_THROWS_AS(QuasiPolynomial({{Coefficient::unknown("", 1.0), FracOrder(1, 1)}}), ValidationError);
  CHECK_THROWS_AS(QuasiPolynomial({{k(std::nan("")), FracOrder(1, 1)}}), ValidationError);
}

TEST_CASE("QuasiPolynomial canonical order is independent of input order") {
  std::vector<Term> terms{{Coefficient::known(1.5), FracOrder(131, 100)},
                          {Coefficient::unknown("b", 2.0), FracOrder(97, 100)},
                          {Coefficient::known(-4), FracOrder(1, 3)},
                          {Coefficient::unknown("c"), FracOrder(0, 1)},
                          {Coefficient::known(0.25), FracOrder(7, 2)}};
  const QuasiPolynomial reference(terms);
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(terms.begin(), terms.end(), rng);
    CHECK(QuasiPolynomial(terms) == reference);
  }
}

TEST_CASE("QuasiPolynomial accessors") {
  const QuasiPolynomial qp = test::furnace_template();
  CHECK_FALSE(qp.fully_known());
  CHECK(qp.unknowns() == std::vector<std::string>{"c", "b", "a"});
  REQUIRE(qp.term_with("b") != nullptr);
  CHECK(qp.term_with("b")->order == FracOrder(97, 100));
  CHECK(qp.term_with("z") == nullptr);
  REQUIRE(qp.term_at(FracOrder(131, 100)) != nullptr);
  CHECK(qp.term_at(FracOrder(1, 2)) == nullptr);
  CHECK_THROWS_AS(qp.evaluate({1.0, 0.0}), ValidationError);
}

TEST_CASE("substitute resolves parameters") {
  const QuasiPolynomial basset = test::basset_template();
  const QuasiPolynomial qp = substitute(basset, {{"a", -3}, {"b", -2}, {"c", -4}});
  CHECK(qp == test::three_term(-3, -2, -4, "0.5", "1"));

  // Leading zero dropped.
  const QuasiPolynomial lower = substitute(basset, {{"a", 0}, {"b", 1}, {"c", 1}});
  REQUIRE(lower.size() == 2);
  CHECK(lower.degree() == FracOrder(1, 2));

  CHECK_THROWS_WITH_AS(substitute(basset, {{"a", 1}, {"b", 1}}), doctest::Contains("'c'"), ValidationError);
  CHECK_THROWS_AS(substitute(basset, {{"a", 1}, {"b", 1}, {"c", INFINITY}}), ValidationError);
  CHECK_THROWS_AS(substitute(basset, {{"a", 0}, {"b", 0}, {"c", 0}}), ValidationError);

  const QuasiPolynomial furnace = substitute(test::furnace_template(), {{"a", 14994}, {"b", 6009.5}, {"c", 1.69}});
  CHECK(furnace.term_at(FracOrder(131, 100))->coeff.value() == 14994);
}

TEST_CASE("substitute applies multipliers and is linear in each binding") {
  const QuasiPolynomial qp({{Coefficient::unknown("a", -2.5), FracOrder(3, 2)}, {Coefficient::known(1), FracOrder(0, 1)}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const double v = dist(rng), lambda = dist(rng);
    const double base = substitute(qp, {{"a", v}}).term_at(FracOrder(3, 2))->coeff.value();
    const double scaled = substitute(qp, {{"a", lambda * v}}).term_at(FracOrder(3, 2))->coeff.value();
    CHECK(base == doctest::Approx(-2.5 * v));
    CHECK(scaled == doctest::Approx(lambda * base));
  }
}

TEST_CASE("bind_partial keeps unbound parameters") {
  const QuasiPolynomial qp = bind_partial(test::basset_template(), {{"b", -2}});
  CHECK(qp.unknowns() == std::vector<std::string>{"c", "a"});
  CHECK(qp.term_at(FracOrder(1, 2))->coeff.value() == -2);
}

TEST_CASE("evaluate uses the principal branch") {
  const QuasiPolynomial qp = test::three_term(1, -2, 2, "0.5", "1");
  const auto v = qp.evaluate({0.0, 1.0});
  // j - 2 * e^{j pi/4} + 2
  CHECK(v.real() == doctest::Approx(2 - std::sqrt(2.0)));
  CHECK(v.imag() == doctest::Approx(1 - std::sqrt(2.0)));
}

TEST_CASE("FracSystem validation") {
  FracSystem sys{test::basset_template()};
  CHECK_NOTHROW(sys.validate());
  sys.numerator = QuasiPolynomial({{Coefficient::known(1), FracOrder(1, 1)}});
  CHECK_THROWS_AS(sys.validate(), ValidationError);
  sys.numerator = QuasiPolynomial({{Coefficient::known(1), FracOrder(1, 2)}});
  CHECK_NOTHROW(sys.validate());
  sys.gain = INFINITY;
  CHECK_THROWS_AS(sys.validate(), ValidationError);
}

TEST_CASE("parse_system reads the furnace definition") {
  const FracSystem sys = parse_system(R"({
    // heating furnace
    "denominator": [
      {"coeff": {"param": "a"}, "order": "1.31"},
      {"coeff": {"param": "b"}, "order": "0.97"},
      {"coeff": {"param": "c", "mult": 1}, "order": 0}
    ]
  })");
  CHECK(sys.denominator == test::furnace_template());
  CHECK(sys.numerator == QuasiPolynomial::constant(1.0));
  CHECK(sys.gain == 1.0);
}

TEST_CASE("parse_system accepts a constant system") {
  const FracSystem sys = parse_system(R"({"denominator": [{"coeff": 1, "order": "0"}]})");
  CHECK(sys.denominator.degree().is_zero());
  CHECK(sys.denominator.fully_known());
}

TEST_CASE("parse_system reports locations") {
  try {
    parse_system("{\n  \"denominator\": [\n    {\"coeff\": 1, \"order\": \"0.5\"},\n  ]\n  oops\n}");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 4);
  }
  try {
    parse_system(R"({"denominator": [{"coeff": 1, "order": "0"}, {"coeff": 2, "ordr": "1"}]})");
    FAIL("expected a schema error");
  } catch (const ParseError& e) {
    CHECK(e.field().find("denominator[1]") == 0);
  }
  CHECK_THROWS_AS(parse_system(R"({"denominator": []})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"numerator": [{"coeff": 1, "order": "0"}]})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"denominator": [{"coeff": 1, "order": "0"}], "window": 3})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"denominator": [{"coeff": "x", "order": "0"}]})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"denominator": [{"coeff": 1, "order": -1}]})"), Error);
  CHECK_THROWS_WITH_AS(parse_system(R"({"denominator": [{"coeff": 1, "order": "1/1001"}]})"),
                       doctest::Contains("Q_MAX"), ValidationError);
  CHECK_THROWS_AS(parse_system(R"({"denominator": [{"coeff": 1, "order": "1"}],
                                   "numerator": [{"coeff": 1, "order": "2"}]})"),
                  ValidationError);
}

TEST_CASE("serialize_system round trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coeff(-1e4, 1e4);
  std::uniform_int_distribution<int> den(1, 1000), count(1, 6), kind(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Term> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const int d = den(rng);
      const FracOrder order(std::uniform_int_distribution<int>(0, 3 * d)(rng), d);
      if (kind(rng) == 0)
        terms.push_back({Coefficient::unknown("p" + std::to_string(i), coeff(rng)), order});
      else
        terms.push_back({Coefficient::known(coeff(rng)), order});
    }
    std::optional<QuasiPolynomial> den_qp;
    try {
      den_qp.emplace(terms);
    } catch (const ValidationError&) {
      continue;  // duplicate orders involving a parameter
    }
    FracSystem sys{*den_qp};
    sys.gain = coeff(rng);
    const std::string text = serialize_system(sys);
    const FracSystem back = parse_system(text);
    CHECK(back == sys);
    CHECK(serialize_system(back) == text);
  }
}

TEST_CASE("load_system reports unreadable files") {
  CHECK_THROWS_AS(load_system("/nonexistent/system.cfg"), FileError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/system.cfg"), FileError);
}
