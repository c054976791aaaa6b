#include <doctest.h>

#include "momsep/errors.hpp"
#include "momsep/monomial.hpp"

using namespace momsep;

TEST_CASE("text form round trips") {
  for (const char* text : {"1", "a", "a+", "a+^2 a", "a+ a b+^3 b^2", "c"}) {
    const auto m = Monomial::parse(text);
    CHECK(Monomial::parse(m.to_string()) == m);
  }
  CHECK(Monomial::parse("Na Nb") == Monomial::parse("a+ a b+ b"));
  CHECK(Monomial::parse("a*b") == Monomial::parse("a b"));
  CHECK(Monomial::parse("a^2").powers(0).annihilation == 2);
  CHECK(Monomial::parse("1").is_identity());
}

TEST_CASE("parse rejects anti-normal order and junk") {
  CHECK_THROWS_AS(Monomial::parse("a a+"), ParseError);
  CHECK_THROWS_AS(Monomial::parse(""), ParseError);
  CHECK_THROWS_AS(Monomial::parse("q^x"), ParseError);
  CHECK_THROWS_AS(Monomial::parse("a^"), ParseError);
}

TEST_CASE("adjoint and products") {
  const auto m = Monomial::parse("a+^2 b");
  CHECK(m.adjoint() == Monomial::parse("a^2 b+"));
  CHECK(m.adjoint().adjoint() == m);
  CHECK(Monomial::creation(0) * Monomial::annihilation(0) == Monomial::number(0));
  CHECK(Monomial::annihilation(0) * Monomial::annihilation(1) == Monomial::parse("a b"));
  // a times a+ is not normally ordered
  CHECK_THROWS_AS(Monomial::annihilation(0) * Monomial::creation(0), ParseError);
}

TEST_CASE("support and restriction") {
  const auto m = Monomial::parse("a+ c^2");
  CHECK(m.support() == std::vector<int>{0, 2});
  CHECK(m.restricted_to({2}) == Monomial::parse("c^2"));
  CHECK(m.mode_span() == 3);
  CHECK(mode_name(1) == "b");
}
