#include <doctest.h>

#include <random>

#include "ftik/invariants.hpp"
#include "oracle.hpp"

using namespace ftik;

namespace {

const char* kTrefoil = "O1+ U2+ O3+ U1+ O2+ U3+";
const char* kFigureEight = "O1+ U2- O3- U1+ O4+ U3- O2- U4+";

// v2 computed straight from the bit-mask enumeration and the pattern weights.
Coefficient v2_oracle(const GaussDiagram& K, const Functional& omega) {
  Coefficient total = 0;
  for (int k = 1; k <= 2; ++k) {
    for (const auto& [key, c] : oracle::phi(K, k)) total += omega.weight(DiagramKey(key)) * c;
  }
  return total;
}

// Applies `count` random insertions and checks the value never moves.
void check_orbit(const char* seed_code, const Functional& omega, const Coefficient& target, uint64_t seed,
                 int count) {
  std::mt19937_64 rng(seed);
  GaussDiagram K = parse_gauss_code(seed_code);
  CHECK(evaluate(omega, K, Method::brute) == target);
  for (int i = 0; i < count; ++i) {
    const MoveSpec m = random_insertion(K, rng);
    const GaussDiagram next = apply_move(K, m);
    CHECK(apply_move(next, inverse_move(K, m)) == K);
    K = next;
    INFO("after move " << i << ": " << serialize(K).text());
    CHECK(evaluate(omega, K, K.size() < 12 ? Method::brute : Method::fast) == target);
  }
}

}  // namespace

TEST_SUITE("invariants") {
  TEST_CASE("v2 weights") {
    const auto v2 = v2_functional();
    CHECK(v2.k == 2);
    CHECK(v2.weights.size() == 4);
    CHECK(v2.weight(DiagramKey("O1+ U2+ U1+ O2+")) == 1);
    CHECK(v2.weight(DiagramKey("O1+ O2+ U1+ U2+")) == 0);
    CHECK(v2.weight(DiagramKey("O1+ U2- U1+ O2-")) == -1);
    CHECK(v2_functional_reversed().weight(DiagramKey("U1- O2- O1- U2-")) == 1);
  }

  TEST_CASE("evaluate examples") {
    const auto t = parse_gauss_code(kTrefoil);
    CHECK(evaluate(Functional{}, t) == 0);
    Functional indicator;
    indicator.k = 1;
    indicator.weights[DiagramKey("O1+ U1+")] = 1;
    CHECK(evaluate(indicator, parse_gauss_code("O1+ U1+")) == 1);
    CHECK(evaluate(v2_functional(), t) == 1);
    CHECK(evaluate(v2_functional_reversed(), t) == 1);
    CHECK(evaluate(v2_functional(), t, Method::brute) == v2_oracle(t, v2_functional()));

    Functional with_empty;
    with_empty.k = 0;
    with_empty.include_phi0 = true;
    with_empty.weights[DiagramKey{}] = Coefficient(1) / 2;
    CHECK(evaluate(with_empty, t) == Coefficient(1) / 2);
  }

  TEST_CASE("figure-eight value") {
    const auto K = parse_gauss_code(kFigureEight);
    CHECK(v2_oracle(K, v2_functional()) == -1);
    CHECK(v2_oracle(K, v2_functional_reversed()) == -1);
    CHECK(evaluate(v2_functional(), K, Method::brute) == -1);
    CHECK(evaluate(v2_functional(), K, Method::fast) == -1);
  }

  TEST_CASE("v2 vanishes below two arrows") {
    for (int n = 0; n <= 1; ++n) {
      oracle::for_each_diagram(n, [](const GaussDiagram& K) {
        CHECK(evaluate(v2_functional(), K) == 0);
        CHECK(evaluate(v2_functional_reversed(), K) == 0);
      });
    }
  }

  TEST_CASE("linearity") {
    std::mt19937_64 rng(3);
    const auto v2 = v2_functional();
    for (int t = 0; t < 50; ++t) {
      const auto a = phi_le_k(random_diagram(6, rng()), 2, Method::brute).vector;
      const auto b = phi_le_k(random_diagram(5, rng()), 2, Method::brute).vector;
      const Coefficient c = Coefficient(static_cast<int64_t>(rng() % 7) - 3) / 2;
      CHECK(v2.apply(a + b) == v2.apply(a) + v2.apply(b));
      CHECK(v2.apply(scale(a, c)) == c * v2.apply(a));
    }
  }

  TEST_CASE("move examples") {
    MoveSpec r1;
    r1.kind = MoveKind::r1_insert;
    r1.first = 0;
    const auto one = apply_move(GaussDiagram{}, r1);
    CHECK(serialize(one).text() == "O1+ U1+");
    r1.tail_first = false;
    r1.sign = Sign::minus;
    CHECK(serialize(apply_move(GaussDiagram{}, r1)).text() == "U1- O1-");

    const auto t = parse_gauss_code(kTrefoil);
    MoveSpec ins{MoveKind::r1_insert, 3, 0, true, Sign::minus, R2Variant::parallel};
    CHECK(apply_move(apply_move(t, ins), inverse_move(t, ins)) == t);

    MoveSpec r2{MoveKind::r2_insert, 0, 2, true, Sign::plus, R2Variant::parallel};
    const auto base = parse_gauss_code("O1+ U1+");
    const auto three = apply_move(base, r2);
    CHECK(three.size() == 3);
    CHECK(serialize(three).text() == "O1+ O2- O3+ U3+ U1+ U2-");
    CHECK(evaluate(v2_functional(), three) == evaluate(v2_functional(), base));
  }

  TEST_CASE("move errors") {
    const auto t = parse_gauss_code(kTrefoil);
    CHECK_THROWS_AS(apply_move(t, {MoveKind::r1_insert, 7}), MoveError);
    CHECK_THROWS_AS(apply_move(t, {MoveKind::r2_insert, 2, 2}), MoveError);
    try {
      apply_move(t, {MoveKind::r1_delete, 0});
      FAIL("deleted a non-R1 pair");
    } catch (const MoveError& e) {
      CHECK(e.kind() == MoveError::Kind::pattern_not_found);
    }
    CHECK_THROWS_AS(apply_move(t, {MoveKind::r2_delete, 0, 3}), MoveError);
  }

  TEST_CASE("every insertion is undone by its matched deletion") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto K = random_diagram(static_cast<int>(seed % 4), seed);
      for (int g = 0; g <= K.length(); ++g) {
        for (bool tail_first : {true, false}) {
          for (Sign s : {Sign::plus, Sign::minus}) {
            const MoveSpec m{MoveKind::r1_insert, g, 0, tail_first, s, R2Variant::parallel};
            CHECK(apply_move(apply_move(K, m), inverse_move(K, m)) == K);
          }
        }
        for (int h = 0; h <= K.length(); ++h) {
          if (h == g) continue;
          for (R2Variant v : {R2Variant::parallel, R2Variant::antiparallel}) {
            for (Sign s : {Sign::plus, Sign::minus}) {
              const MoveSpec m{MoveKind::r2_insert, g, h, true, s, v};
              CHECK(apply_move(apply_move(K, m), inverse_move(K, m)) == K);
            }
          }
        }
      }
    }
  }

  TEST_CASE("every single move keeps v2 on small diagrams") {
    const auto v2 = v2_functional();
    for (uint64_t seed = 0; seed < 6; ++seed) {
      const auto K = random_diagram(3, 40 + seed);
      const Coefficient before = v2_oracle(K, v2);
      for (int g = 0; g <= K.length(); ++g) {
        for (int h = 0; h <= K.length(); ++h) {
          if (h == g) continue;
          for (R2Variant var : {R2Variant::parallel, R2Variant::antiparallel}) {
            for (Sign s : {Sign::plus, Sign::minus}) {
              CHECK(v2_oracle(apply_move(K, {MoveKind::r2_insert, g, h, true, s, var}), v2) == before);
            }
          }
        }
        for (bool tf : {true, false}) {
          for (Sign s : {Sign::plus, Sign::minus}) {
            CHECK(v2_oracle(apply_move(K, {MoveKind::r1_insert, g, 0, tf, s, R2Variant::parallel}), v2) == before);
          }
        }
      }
    }
  }

  TEST_CASE("v2 is constant along random move orbits") {
    for (const Functional& omega : {v2_functional(), v2_functional_reversed()}) {
      check_orbit(kTrefoil, omega, 1, 101, 120);
      check_orbit(kFigureEight, omega, -1, 202, 120);
    }
  }

  TEST_CASE("random diagrams are deterministic") {
    CHECK(random_diagram(0, 5).size() == 0);
    CHECK(random_diagram(12, 9) == random_diagram(12, 9));
    CHECK(!(random_diagram(12, 9) == random_diagram(12, 10)));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(uniform_below(rng, 7) < 7);
  }

  TEST_CASE("fast and brute phi_2 agree on larger random diagrams") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto K = random_diagram(50, seed);
      CHECK(phi_k_fast(K, 2, {1, 1}).vector == phi_k_brute(K, 2).vector);
    }
  }

  TEST_CASE("functional JSON") {
    const auto v2 = v2_functional();
    const auto back = functional_from_json(functional_to_json(v2));
    CHECK(back.k == 2);
    CHECK(back.weights == v2.weights);
    const auto f = functional_from_json(
        R"({"k": 1, "include_phi0": true, "weights": [{"diagram": "U5- O5-", "coeff": "3/4"}, {"diagram": "", "coeff": 2}]})");
    CHECK(f.include_phi0);
    CHECK(f.weight(DiagramKey("U1- O1-")) == Coefficient(3) / 4);
    CHECK(f.weight(DiagramKey{}) == 2);
    CHECK_THROWS_AS(functional_from_json(R"({"k": 1, "weights": [{"diagram": "O1+ O2+ U1+ U2+", "coeff": 1}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_functional("/nonexistent/functional.json"), UnknownFunctional);
    CHECK(load_functional("v2").weights == v2.weights);
  }
}
