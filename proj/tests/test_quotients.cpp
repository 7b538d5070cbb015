#include "doctest.h"

#include <map>

#include "test_support.hpp"
#include "tolquot/errors.hpp"
#include "tolquot/quotients.hpp"

using namespace tolquot;
using namespace tolquot::testing;

namespace {

std::vector<ElementSet> table_of(MultiAlgebra const& q, std::size_t op) {
  return q.table(op).entries;
}

// g maps masks 1..7 to 3,3,3,5,5,6,6.
FiniteAlgebra g_algebra() {
  return unary_algebra("g", {m(3), m(3), m(3), m(5), m(5), m(6), m(6)});
}

}  // namespace

TEST_CASE("tolerance quotient of the power-set algebra by non-disjointness") {
  auto const q = tolerance_quotient(pow3_plus(), nu3());
  std::vector<ElementSet> const blocks{S1(), S2(), S(), S3()};
  REQUIRE(q.blocks.blocks() == blocks);
  CHECK(q.construction == Construction::tolerance);
  CHECK(q.quotient.size() == 4);
  std::vector<ElementId> s1_s2{0, 1};
  CHECK(q.quotient.apply(0, s1_s2) == ElementSet::of(4, {0, 1, 2}));  // {S1, S2, S}
  CHECK(table_of(q.quotient, 0) == naive_quotient_tables(pow3_plus(), blocks)[0]);
}

TEST_CASE("degenerate tolerances") {
  Rng rng(41);
  auto const alg = random_algebra(rng, 5, {1, 2});
  SUBCASE("diagonal mirrors the algebra") {
    auto const q = tolerance_quotient(alg, BinaryRelation::diagonal(5));
    CHECK(q.quotient.same_tables(as_multialgebra(alg)));
  }
  SUBCASE("full relation collapses to one block") {
    auto const q = tolerance_quotient(alg, BinaryRelation::full(5));
    REQUIRE(q.quotient.size() == 1);
    for (std::size_t op = 0; op < 2; ++op) {
      for (auto const& v : q.quotient.table(op).entries) {
        CHECK(v == ElementSet::full(1));
      }
    }
  }
}

TEST_CASE("tolerance quotient rejects non-tolerances") {
  auto const s = unary_algebra("s", {1, 2, 0});
  std::vector<ElementPair> p{{0, 1}};
  CHECK_THROWS_AS(tolerance_quotient(s, BinaryRelation::from_pairs(3, p)), NotATolerance);
}

TEST_CASE("full covering quotient by the principal filters") {
  Covering const filters(7, {S1(), S2(), S3()});
  auto const q = full_covering_quotient(pow3_plus(), nu3(), filters);
  CHECK(q.construction == Construction::full_covering);
  auto value = [&](ElementId a, ElementId b) {
    std::vector<ElementId> args{a, b};
    return q.quotient.apply(0, args);
  };
  CHECK(value(0, 1) == ElementSet::of(3, {0, 1}));
  CHECK(value(0, 0) == ElementSet::of(3, {0}));
  CHECK(value(0, 2) == ElementSet::of(3, {0, 2}));
  CHECK(q.quotient.same_tables(
      MultiAlgebra(3, {{"+", MultiOperationTable{2, naive_quotient_tables(
                                                        pow3_plus(), filters.blocks())[0]}}})));
}

TEST_CASE("full covering quotient by all blocks equals the tolerance quotient") {
  auto const a = tolerance_quotient(pow3_plus(), nu3());
  auto const b = full_covering_quotient(pow3_plus(), nu3(), maximal_cliques(nu3()));
  CHECK(a.quotient == b.quotient);
  CHECK(a.blocks == b.blocks);
}

TEST_CASE("full covering quotient can have an empty value") {
  auto const g = g_algebra();
  REQUIRE(is_tolerance(g, nu3()));
  Covering const filters(7, {S1(), S2(), S3()});
  try {
    full_covering_quotient(g, nu3(), filters);
    FAIL("expected EmptyValue");
  } catch (EmptyValue const& e) {
    CHECK(e.op() == "g");
    CHECK(e.block_tuple() == std::vector<std::size_t>{0});
  }
  // The same covering is fine for Construction 1, where S is available.
  auto const q = tolerance_quotient(g, nu3());
  std::vector<ElementId> s1{0};
  CHECK(q.quotient.apply(0, s1) == ElementSet::of(4, {2}));
}

TEST_CASE("full covering quotient rejects coverings that are not full") {
  auto const id = unary_algebra("id", {0, 1, 2, 3});
  std::vector<ElementPair> p{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  auto const cycle = BinaryRelation::from_pairs(4, p);
  Covering three(4, {ElementSet::of(4, {0, 1}), ElementSet::of(4, {1, 2}), ElementSet::of(4, {2, 3})});
  CHECK_THROWS_AS(full_covering_quotient(id, cycle, three), NotFullCovering);
}

TEST_CASE("quotient budget") {
  QuotientOptions tight;
  tight.budget = 15;
  CHECK_THROWS_AS(tolerance_quotient(pow3_plus(), nu3(), tight), ResourceExceeded);
  tight.budget = 16;
  CHECK_NOTHROW(tolerance_quotient(pow3_plus(), nu3(), tight));
}

TEST_CASE("parallel evaluation gives the same quotient") {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    auto const alg = random_algebra(rng, 6, {1, 2});
    auto const tol = tolerance_generated_by(alg, random_pairs(rng, 6, 1));
    QuotientOptions par;
    par.jobs = 4;
    CHECK(tolerance_quotient(alg, tol).quotient == tolerance_quotient(alg, tol, par).quotient);
  }
}

TEST_CASE("block determinacy") {
  SUBCASE("congruences are determinate") {
    Rng rng(47);
    for (int i = 0; i < 50; ++i) {
      auto const alg = random_algebra(rng, 1 + rng() % 6, {1, 2});
      auto const cong = generated_congruence(alg, random_pairs(rng, alg.size(), 1));
      CHECK(!check_block_determinacy(alg, cong).has_value());
    }
  }
  SUBCASE("identity on a path") {
    auto const id = unary_algebra("id", {0, 1, 2});
    std::vector<ElementPair> p{{0, 1}, {1, 2}};
    auto const path = BinaryRelation::from_pairs(3, p);
    auto const w = check_block_determinacy(id, path);
    REQUIRE(w.has_value());
    CHECK(w->block_tuple == std::vector<std::size_t>{0});  // block {0,1}
    CHECK(w->block == 1);                                    // block {1,2}
    CHECK(w->tuple_in == std::vector<ElementId>{1});
    CHECK(w->tuple_out == std::vector<ElementId>{0});
  }
  SUBCASE("power-set algebra with non-disjointness") {
    auto const w = check_block_determinacy(pow3_plus(), nu3());
    REQUIRE(w.has_value());
    CHECK(w == naive_determinacy(pow3_plus(), {S1(), S2(), S(), S3()}));
    // (S1, S1) against S2: {1}+{1} = {1} misses S2, {1}+{1,2} = {1,2,3} hits it.
    CHECK(w->block_tuple == std::vector<std::size_t>{0, 0});
    CHECK(w->block == 1);
    CHECK(w->tuple_in == std::vector<ElementId>{m(1), m(3)});
    CHECK(w->tuple_out == std::vector<ElementId>{m(1), m(1)});
  }
  SUBCASE("agrees with the naive scan") {
    Rng rng(53);
    for (int i = 0; i < 200; ++i) {
      auto const alg = random_algebra(rng, 1 + rng() % 6, {1, 2});
      auto const tol = tolerance_generated_by(alg, random_pairs(rng, alg.size(), 1));
      CHECK(check_block_determinacy(alg, tol)
            == naive_determinacy(alg, maximal_cliques(tol).blocks()));
    }
  }
}

TEST_CASE("construction 1 values are nonempty and match the definition") {
  Rng rng(59);
  for (int i = 0; i < 150; ++i) {
    std::size_t const n = 1 + rng() % 8;
    auto const alg = random_algebra(rng, n, rng() % 2 ? std::vector<std::size_t>{1}
                                                      : std::vector<std::size_t>{0, 1, 2});
    auto const tol = tolerance_generated_by(alg, random_pairs(rng, n, rng() % 3));
    auto const q = tolerance_quotient(alg, tol);
    auto const naive = naive_quotient_tables(alg, q.blocks.blocks());
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      CHECK(q.quotient.table(op).entries == naive[op]);
      for (auto const& v : q.quotient.table(op).entries) {
        CHECK(!v.empty());
      }
    }
  }
}

TEST_CASE("congruence quotients are classical quotient algebras") {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    std::size_t const n = 1 + rng() % 7;
    auto const lifted = lifted_congruence(rng, n, 1 + rng() % n, {1, 2});
    auto const& alg = lifted.algebra;
    auto const& cong = lifted.congruence;
    REQUIRE(naive_is_tolerance(alg, cong));
    auto const q = tolerance_quotient(alg, cong);
    // Classes via smallest member; class of f(representatives).
    std::map<ElementId, std::size_t> class_of_rep;
    std::vector<std::size_t> cls(n);
    for (std::size_t b = 0; b < q.blocks.block_count(); ++b) {
      q.blocks.block(b).for_each([&](ElementId e) { cls[e] = b; });
    }
    for (std::size_t op = 0; op < 2; ++op) {
      std::size_t const arity = alg.signature()[op].arity;
      std::size_t const k = q.blocks.block_count();
      for (std::size_t bt = 0; bt < tuple_count(k, arity); ++bt) {
        auto const bi = decode_tuple(k, arity, bt);
        std::vector<ElementId> reps;
        for (auto b : bi) {
          reps.push_back(*q.blocks.block(b).first());
        }
        auto const expected = ElementSet::singleton(k, static_cast<ElementId>(cls[alg.apply(op, reps)]));
        CHECK(q.quotient.table(op).entries[bt] == expected);
      }
    }
  }
}

TEST_CASE("construction 2 values are construction 1 values restricted to the covering") {
  Rng rng(67);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t const n = 2 + rng() % 5;
    auto const alg = random_algebra(rng, n, {1});
    auto const tol = tolerance_generated_by(alg, random_pairs(rng, n, 1 + rng() % 2));
    auto const all = maximal_cliques(tol);
    auto const c1 = tolerance_quotient(alg, tol);
    std::size_t const k = all.block_count();
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << k); ++pick) {
      std::vector<ElementSet> chosen;
      for (std::size_t b = 0; b < k; ++b) {
        if ((pick >> b) & 1U) {
          chosen.push_back(all.block(b));
        }
      }
      if (covering_defect(n, chosen) || find_full_covering_violation(alg, tol, chosen)) {
        continue;
      }
      Covering const cov(n, chosen);
      try {
        auto const c2 = full_covering_quotient(alg, tol, cov);
        ++checked;
        // Map covering index -> block index in the tolerance quotient.
        std::vector<std::size_t> to_all;
        for (auto const& b : cov.blocks()) {
          to_all.push_back(*all.index_of(b));
        }
        std::size_t const arity = 1;
        for (std::size_t ct = 0; ct < tuple_count(cov.block_count(), arity); ++ct) {
          ElementSet restricted(cov.block_count());
          auto const& full_value = c1.quotient.table(0).entries[to_all[ct]];
          for (std::size_t j = 0; j < cov.block_count(); ++j) {
            if (full_value.test(static_cast<ElementId>(to_all[j]))) {
              restricted.set(static_cast<ElementId>(j));
            }
          }
          CHECK(c2.quotient.table(0).entries[ct] == restricted);
        }
      } catch (EmptyValue const&) {
        // Also consistent: the restriction is empty somewhere.
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("unary determinacy sweep up to five elements") {
  auto const report = sweep_unary_determinacy(3);
  CHECK(report.algebras == 1 + 4 + 27);
  CHECK(report.relations == 1 + 4 * 2 + 27 * 8);
  REQUIRE(report.first.has_value());
  CHECK(report.first->witness == naive_determinacy(report.first->algebra,
                                                   maximal_cliques(report.first->tolerance).blocks()));
}
