#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "distdeg/errors.hpp"
#include "distdeg/polynomial.hpp"

using namespace distdeg;

namespace {

const std::vector<std::string> kY{"y1", "y2"};
const std::vector<std::string> kY3{"y1", "y2", "y3"};

Polynomial P(const std::string& s, const std::vector<std::string>& v = kY) {
  return parse_polynomial(s, v);
}

Polynomial random_poly(std::mt19937_64& rng, std::size_t vars, int terms, int max_deg) {
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> deg(0, max_deg);
  Polynomial p(vars);
  for (int t = 0; t < terms; ++t) {
    Exponent e(vars);
    for (auto& k : e) k = static_cast<std::uint32_t>(deg(rng));
    p.add_term(e, Complex{nd(rng), nd(rng)});
  }
  return p;
}

double rel_distance(const Polynomial& a, const Polynomial& b) {
  const double scale = std::max({1.0, a.coefficient_norm(), b.coefficient_norm()});
  return max_coefficient_distance(a, b) / scale;
}

}  // namespace

TEST_CASE("parse circle generator") {
  const auto p = P("y1^2 + y2^2 - 1");
  CHECK(p.num_terms() == 3);
  CHECK(p.total_degree() == 2);
  CHECK(p.coefficient({2, 0}) == Complex(1));
  CHECK(p.coefficient({0, 0}) == Complex(-1));
}

TEST_CASE("parse zero") {
  const std::vector<std::string> v{"y1"};
  const auto p = parse_polynomial("0", v);
  CHECK(p.is_zero());
  CHECK(p.terms().empty());
  CHECK(p.total_degree() == 0);
}

TEST_CASE("binomial cube") {
  const auto p = P("(y1-y2)^3");
  CHECK(p.num_terms() == 4);
  CHECK(p.coefficient({3, 0}) == Complex(1));
  CHECK(p.coefficient({2, 1}) == Complex(-3));
  CHECK(p.coefficient({1, 2}) == Complex(3));
  CHECK(p.coefficient({0, 3}) == Complex(-1));
}

TEST_CASE("rational literals and constant division") {
  const auto p = P("y1^2/4 + 0.5*y2 - 3/2");
  CHECK(p.coefficient({2, 0}) == Complex(0.25));
  CHECK(p.coefficient({0, 1}) == Complex(0.5));
  CHECK(p.coefficient({0, 0}) == Complex(-1.5));
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse_polynomial(text, kY);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("expected a ParseError for " << text);
    return 0;
  };
  CHECK(position_of("y1 + z3") == 5);
  CHECK(position_of("y1^0") == 3);
  CHECK(position_of("y1^-2") == 3);
  CHECK(position_of("y1^1.5") == 3);
  CHECK(position_of("(y1 + y2") == 0);
  CHECK(position_of("y1 $ y2") == 3);
  CHECK_THROWS_AS(parse_polynomial("y1 / y2", kY), ParseError);
  CHECK_THROWS_AS(parse_polynomial("", kY), ParseError);
  CHECK_THROWS_AS(parse_polynomial("y1 / 0", kY), ParseError);
}

TEST_CASE("print-parse round trip is idempotent") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_poly(rng, 3, 6, 3);
    const auto text = to_string(p, kY3);
    const auto q = parse_polynomial(text, kY3);
    CHECK(q == p);
    CHECK(to_string(q, kY3) == text);
  }
  CHECK(to_string(P("y2^2 - 1 + y1^2"), kY) == "y1^2 + y2^2 - 1");
}

TEST_CASE("evaluate") {
  const auto circle = P("y1^2 + y2^2 - 1");
  const std::vector<double> on{1.0, 0.0};
  const std::vector<double> off{3.0, 4.0};
  const std::vector<double> zero{0.0, 0.0};
  CHECK(evaluate(circle, std::span<const double>(on)) == Complex(0));
  CHECK(evaluate(circle, std::span<const double>(off)) == Complex(24));
  const auto p = P("7 - 3*y1*y2 + y2^5");
  CHECK(evaluate(p, std::span<const double>(zero)) == Complex(7));
  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(evaluate(circle, std::span<const double>(bad)), std::invalid_argument);
}

TEST_CASE("differentiate") {
  CHECK(differentiate(P("y1^2 + y2^2 - 1"), 0) == P("2*y1"));
  CHECK(differentiate(P("y2^2 - y1^3"), 0) == P("-3*y1^2"));
  CHECK(differentiate(P("5"), 0).is_zero());
  CHECK_THROWS_AS(differentiate(P("y1"), 2), std::out_of_range);
}

TEST_CASE("derivative matches central differences") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 40; ++k) {
    const auto p = random_poly(rng, 3, 5, 2);  // degree <= 6
    std::vector<double> x{nd(rng), nd(rng), nd(rng)};
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-5;
      auto xp = x;
      auto xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Complex fd = (evaluate(p, std::span<const double>(xp)) -
                          evaluate(p, std::span<const double>(xm))) /
                         (2 * h);
      const Complex exact = evaluate(differentiate(p, j), std::span<const double>(x));
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const auto a = random_poly(rng, 3, 4, 2);
    const auto b = random_poly(rng, 3, 4, 2);
    const auto c = random_poly(rng, 3, 4, 2);
    CHECK(rel_distance((a * b) * c, a * (b * c)) < 1e-12);
    CHECK(rel_distance(a * (b + c), a * b + a * c) < 1e-12);
    CHECK(rel_distance(a + b, b + a) < 1e-12);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("pow and compose") {
  CHECK(pow(P("y1 + 1"), 2) == P("y1^2 + 2*y1 + 1"));
  const std::vector<Polynomial> images{P("y1 + y2"), P("y1 - y2")};
  CHECK(rel_distance(compose(P("y1*y2"), images), P("y1^2 - y2^2")) < 1e-15);
}

TEST_CASE("imaginary unit round trip") {
  const auto p = P("(1 + 2*I)*y1 - I");
  CHECK(p.coefficient({1, 0}) == Complex(1, 2));
  CHECK(parse_polynomial(to_string(p, kY), kY) == p);
}

TEST_CASE("minors of the circle augmented matrix") {
  const std::vector<std::string> v{"y1", "y2", "x1", "x2"};
  PolyMatrix m(2, 2, 4);
  m.set(0, 0, parse_polynomial("2*y1", v));
  m.set(0, 1, parse_polynomial("x1 - y1", v));
  m.set(1, 0, parse_polynomial("2*y2", v));
  m.set(1, 1, parse_polynomial("x2 - y2", v));
  const auto minors = all_minors(m, 2);
  REQUIRE(minors.size() == 1);
  CHECK(rel_distance(minors[0], parse_polynomial("2*y1*(x2 - y2) - 2*y2*(x1 - y1)", v)) == 0.0);
}

TEST_CASE("1-minors of a constant identity") {
  PolyMatrix m(2, 2, 1);
  m.set(0, 0, Polynomial::constant(1, 1.0));
  m.set(1, 1, Polynomial::constant(1, 1.0));
  const auto minors = all_minors(m, 1);
  REQUIRE(minors.size() == 4);
  CHECK(minors[0] == Polynomial::constant(1, 1.0));
  CHECK(minors[1].is_zero());
  CHECK(minors[2].is_zero());
  CHECK(minors[3] == Polynomial::constant(1, 1.0));
}

TEST_CASE("3x2 minors come in row-set order") {
  // Rows r1, r2, r3 with distinct constant entries: det over {i,j} is easy by hand.
  PolyMatrix m(3, 2, 1);
  const double a[3][2] = {{1, 2}, {3, 5}, {7, 11}};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) m.set(r, c, Polynomial::constant(1, a[r][c]));
  }
  const auto minors = all_minors(m, 2);
  REQUIRE(minors.size() == 3);
  CHECK(minors[0] == Polynomial::constant(1, 1 * 5 - 2 * 3));
  CHECK(minors[1] == Polynomial::constant(1, 1 * 11 - 2 * 7));
  CHECK(minors[2] == Polynomial::constant(1, 3 * 11 - 5 * 7));
}

TEST_CASE("minors count and equal rows") {
  std::mt19937_64 rng(5);
  PolyMatrix m(4, 3, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto p = random_poly(rng, 3, 3, 2);
    m.set(0, c, p);
    m.set(2, c, p);
    m.set(1, c, random_poly(rng, 3, 3, 2));
    m.set(3, c, random_poly(rng, 3, 3, 2));
  }
  CHECK(all_minors(m, 2).size() == 6 * 3);
  for (std::size_t k = 2; k <= 3; ++k) {
    std::size_t equal_row_minors = 0;
    for (const auto& minor : all_minors(m, k)) equal_row_minors += minor.coefficient_norm() <= 1e-12;
    CHECK(equal_row_minors > 0);
  }
  // A matrix whose rows are all equal has only zero minors for k >= 2.
  PolyMatrix same(3, 3, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto p = random_poly(rng, 3, 3, 2);
    for (std::size_t r = 0; r < 3; ++r) same.set(r, c, p);
  }
  for (std::size_t k = 2; k <= 3; ++k) {
    for (const auto& minor : all_minors(same, k)) {
      CHECK(minor.coefficient_norm() <= 1e-12);
    }
  }
  CHECK_THROWS_AS(all_minors(m, 4), std::invalid_argument);
  CHECK_THROWS_AS(all_minors(m, 0), std::invalid_argument);
}
