#include <doctest.h>

#include <random>

#include "ftik/gd_vector.hpp"

using namespace ftik;

namespace {

const DiagramKey D1("O1+ U1+");
const DiagramKey D2("U1+ O1+");
const DiagramKey D3("O1+ U2+ U1+ O2+");

GDVector random_vector(std::mt19937_64& rng) {
  const DiagramKey keys[] = {DiagramKey{}, D1, D2, D3, DiagramKey("O1- U1-")};
  GDVector v;
  for (const auto& key : keys) {
    if (rng() % 3 == 0) continue;
    const auto num = static_cast<int64_t>(rng() % 13) - 6;
    const auto den = static_cast<int64_t>(rng() % 4) + 1;
    v.add_term(key, Coefficient(num) / den);
  }
  return v;
}

bool has_zero_term(const GDVector& v) {
  for (const auto& [key, c] : v.terms()) {
    if (c == 0) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("gd_vector") {
  TEST_CASE("add examples") {
    const GDVector a{{D1, 2}};
    CHECK(a + GDVector{} == a);
    CHECK((GDVector{{D1, 1}} + GDVector{{D1, -1}}).empty());
    CHECK(GDVector{{D1, 2}} + GDVector{{D1, 1}, {D2, 3}} == GDVector{{D1, 3}, {D2, 3}});
  }

  TEST_CASE("scale examples") {
    const GDVector a{{D1, 2}, {D2, -5}};
    CHECK(scale(a, 1) == a);
    CHECK(scale(GDVector{{D1, 6}}, Coefficient(1) / 3) == GDVector{{D1, 2}});
    CHECK(scale(a, 0).empty());
  }

  TEST_CASE("mass examples") {
    CHECK(mass(GDVector{}) == 0);
    CHECK(mass(GDVector{{D1, 3}, {D2, -1}}) == 2);
  }

  TEST_CASE("coefficient text") {
    CHECK(to_string(Coefficient(3)) == "3");
    CHECK(to_string(Coefficient(-6) / 4) == "-3/2");
    CHECK(parse_coefficient("-3/2") == Coefficient(-3) / 2);
    CHECK(parse_coefficient("4/2") == 2);
    CHECK(parse_coefficient("17") == 17);
    CHECK_THROWS_AS(parse_coefficient("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coefficient("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coefficient(""), std::invalid_argument);
  }

  TEST_CASE("max arrows") {
    CHECK(!GDVector{}.max_arrows());
    CHECK(GDVector{{DiagramKey{}, 1}}.max_arrows() == 0);
    CHECK(GDVector{{D1, 1}, {D3, 2}}.max_arrows() == 2);
  }

  TEST_CASE("monoid and module laws on random vectors") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
      const GDVector a = random_vector(rng), b = random_vector(rng), c = random_vector(rng);
      const Coefficient x = Coefficient(static_cast<int64_t>(rng() % 9) - 4) / static_cast<int64_t>(rng() % 5 + 1);
      const Coefficient y = Coefficient(static_cast<int64_t>(rng() % 9) - 4);
      CHECK(a + b == b + a);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a + GDVector{} == a);
      CHECK(scale(a + b, x) == scale(a, x) + scale(b, x));
      CHECK(scale(a, x + y) == scale(a, x) + scale(a, y));
      CHECK((a + scale(a, -1)).empty());
      CHECK(mass(a + b) == mass(a) + mass(b));
      CHECK(!has_zero_term(a + b));
      CHECK(!has_zero_term(scale(a, x)));
    }
  }
}
