#include "doctest.h"

#include "test_support.hpp"
#include "tolquot/errors.hpp"
#include "tolquot/realization.hpp"
#include "tolquot/structures.hpp"

using namespace tolquot;
using namespace tolquot::testing;

TEST_CASE("tuple encoding is a bijection onto table indices") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t arity = 0; arity <= 3; ++arity) {
      std::size_t const count = tuple_count(n, arity);
      std::vector<ElementId> t(arity, 0);
      std::size_t expected = 0;
      do {
        CHECK(encode_tuple(n, t) == expected);
        CHECK(decode_tuple(n, arity, expected) == t);
        ++expected;
      } while (next_tuple(t, n));
      CHECK(expected == count);
    }
  }
}

TEST_CASE("row-major index places the first coordinate highest") {
  std::vector<ElementId> t{2, 0, 1};
  CHECK(encode_tuple(3, t) == 2 * 9 + 0 * 3 + 1);
}

TEST_CASE("pair multi-groupoid multi-groupoid evaluates to the pair") {
  auto const ma = pair_groupoid();
  CHECK(ma.size() == 3);
  std::vector<ElementId> args{0, 2};
  CHECK(evaluate(ma, "+", args) == ElementSet::of(3, {0, 2}));
  args = {0, 1};
  CHECK(evaluate(ma, "+", args) == ElementSet::of(3, {0, 1}));
}

TEST_CASE("evaluate on an algebra returns a singleton") {
  auto const alg = unary_algebra("id", {0, 1, 2});
  for (ElementId x = 0; x < 3; ++x) {
    std::vector<ElementId> args{x};
    CHECK(evaluate(alg, "id", args) == ElementSet::singleton(3, x));
  }
  auto const one = unary_algebra("f", {0});
  std::vector<ElementId> zero{0};
  CHECK(evaluate(one, "f", zero) == ElementSet::singleton(1, 0));
}

TEST_CASE("power-set algebra joins singletons") {
  auto const alg = pow3_plus();
  std::vector<ElementId> args{m(1), m(2)};
  CHECK(evaluate(alg, "+", args) == ElementSet::singleton(7, m(3)));
  args = {m(3), m(5)};
  CHECK(evaluate(alg, "+", args) == ElementSet::singleton(7, m(7)));
}

TEST_CASE("evaluate rejects unknown operations and wrong arity") {
  auto const ma = pair_groupoid();
  std::vector<ElementId> one{0};
  std::vector<ElementId> two{0, 1};
  CHECK_THROWS_AS(evaluate(ma, "*", two), ArgumentError);
  CHECK_THROWS_AS(evaluate(ma, "+", one), ArgumentError);
  std::vector<ElementId> out_of_range{0, 3};
  CHECK_THROWS_AS(evaluate(ma, "+", out_of_range), ArgumentError);
}

TEST_CASE("structure invariants are enforced on construction") {
  SUBCASE("empty multi-operation value") {
    MultiOperationTable t{1, {ElementSet::of(2, {0}), ElementSet(2)}};
    CHECK_THROWS_WITH_AS(MultiAlgebra(2, {{"f", t}}),
                         doctest::Contains("empty multi-operation value"), InvariantError);
  }
  SUBCASE("table length") {
    CHECK_THROWS_AS(FiniteAlgebra(2, {{"f", OperationTable{2, {0, 1, 1}}}}), InvariantError);
  }
  SUBCASE("entry out of range") {
    CHECK_THROWS_WITH_AS(FiniteAlgebra(2, {{"f", OperationTable{1, {0, 2}}}}),
                         doctest::Contains("(1)"), InvariantError);
  }
  SUBCASE("duplicate or malformed names") {
    CHECK_THROWS_AS(FiniteAlgebra(1, {{"f", OperationTable{0, {0}}}, {"f", OperationTable{0, {0}}}}),
                    InvariantError);
    CHECK_THROWS_AS(FiniteAlgebra(1, {{"a b", OperationTable{0, {0}}}}), InvariantError);
    CHECK_THROWS_AS(FiniteAlgebra(1, {{"", OperationTable{0, {0}}}}), InvariantError);
  }
  SUBCASE("empty universe") {
    CHECK_THROWS_AS(FiniteAlgebra(0, {}), InvariantError);
  }
}

TEST_CASE("nullary operations have one table entry") {
  FiniteAlgebra alg(3, {{"c", OperationTable{0, {2}}}});
  std::vector<ElementId> none;
  CHECK(evaluate(alg, "c", none) == ElementSet::singleton(3, 2));
}

TEST_CASE("signature order does not depend on construction order") {
  FiniteAlgebra a(2, {{"g", OperationTable{1, {1, 0}}}, {"f", OperationTable{0, {1}}}});
  FiniteAlgebra b(2, {{"f", OperationTable{0, {1}}}, {"g", OperationTable{1, {1, 0}}}});
  CHECK(a == b);
  CHECK(a.signature()[0].name == "f");
}

TEST_CASE("evaluate is singleton on algebras and nonempty on multi-algebras") {
  Rng rng(7);
  for (int round = 0; round < 50; ++round) {
    std::size_t const n = 1 + rng() % 5;
    auto const alg = random_algebra(rng, n, {0, 1, 2});
    auto const ma = random_multialgebra(rng, n, {0, 1, 2});
    for (std::size_t op = 0; op < 3; ++op) {
      std::size_t const arity = alg.signature()[op].arity;
      std::vector<ElementId> t(arity, 0);
      do {
        CHECK(evaluate(alg, alg.signature()[op].name, t).count() == 1);
        CHECK(!evaluate(ma, ma.signature()[op].name, t).empty());
      } while (next_tuple(t, n));
    }
  }
}
