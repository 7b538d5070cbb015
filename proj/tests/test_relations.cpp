#include "doctest.h"

#include "test_support.hpp"
#include "tolquot/errors.hpp"
#include "tolquot/powerset.hpp"
#include "tolquot/realization.hpp"
#include "tolquot/relations.hpp"

using namespace tolquot;
using namespace tolquot::testing;

TEST_CASE("non-disjointness is a tolerance on the power-set algebra") {
  CHECK(is_tolerance(pow3_plus(), nu3()));
  CHECK(is_tolerance(pow3_plus(), nondisjointness(3)));
  CHECK(naive_is_tolerance(pow3_plus(), nu3()));
}

TEST_CASE("the diagonal is always a tolerance") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto const alg = random_algebra(rng, 1 + rng() % 5, {1, 2});
    CHECK(is_tolerance(alg, BinaryRelation::diagonal(alg.size())));
  }
}

TEST_CASE("substitution violation for cyclic successor") {
  auto const alg = unary_algebra("s", {1, 2, 0});
  std::vector<ElementPair> pairs{{0, 1}};
  auto const rel = BinaryRelation::from_pairs(3, pairs);
  auto const v = find_substitution_violation(alg, rel);
  REQUIRE(v.has_value());
  CHECK(v->op == "s");
  CHECK(v->lhs == std::vector<ElementId>{0});
  CHECK(v->rhs == std::vector<ElementId>{1});
  CHECK(v->lhs_image == 1);
  CHECK(v->rhs_image == 2);
  CHECK_THROWS_AS(require_tolerance(alg, rel), NotATolerance);
  CHECK_THROWS_AS(find_substitution_violation(alg, BinaryRelation::diagonal(4)), ArgumentError);
}

TEST_CASE("substitution check agrees with the naive pairwise check") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::size_t const n = 1 + rng() % 5;
    auto const alg = random_algebra(rng, n, {1, 2});
    auto const rel = random_relation(rng, n, 0.5);
    CHECK(is_tolerance(alg, rel) == naive_is_tolerance(alg, rel));
  }
}

TEST_CASE("tolerance generation") {
  auto const max3 = binary_algebra("max", 3, {0, 1, 2, 1, 1, 2, 2, 2, 2});
  SUBCASE("no pairs gives the diagonal") {
    CHECK(tolerance_generated_by(max3, {}).same_pairs(BinaryRelation::diagonal(3)));
  }
  SUBCASE("max with (0,1)") {
    std::vector<ElementPair> p{{0, 1}};
    std::vector<ElementPair> expected{{0, 1}};
    CHECK(tolerance_generated_by(max3, p).same_pairs(BinaryRelation::from_pairs(3, expected)));
  }
  SUBCASE("all pairs gives the full relation") {
    std::vector<ElementPair> all;
    for (ElementId a = 0; a < 3; ++a) {
      for (ElementId b = 0; b < 3; ++b) {
        all.emplace_back(a, b);
      }
    }
    CHECK(tolerance_generated_by(max3, all).same_pairs(BinaryRelation::full(3)));
  }
}

TEST_CASE("generated tolerance is the intersection of all tolerances containing the pairs") {
  // Every reflexive-symmetric relation on n <= 3 elements, by edge mask.
  Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    std::size_t const n = 1 + rng() % 3;
    auto const alg = random_algebra(rng, n, rng() % 2 ? std::vector<std::size_t>{1}
                                                      : std::vector<std::size_t>{1, 2});
    auto const pairs = random_pairs(rng, n, rng() % 3);
    std::vector<ElementPair> edges;
    for (ElementId a = 0; a < n; ++a) {
      for (ElementId b = a + 1; b < n; ++b) {
        edges.emplace_back(a, b);
      }
    }
    std::vector<ElementSet> meet(n, ElementSet::full(n));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
      std::vector<ElementPair> chosen;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if ((mask >> e) & 1U) {
          chosen.push_back(edges[e]);
        }
      }
      auto const rel = BinaryRelation::from_pairs(n, chosen);
      bool contains = true;
      for (auto [a, b] : pairs) {
        contains = contains && rel.related(a, b);
      }
      if (contains && naive_is_tolerance(alg, rel)) {
        for (std::size_t a = 0; a < n; ++a) {
          meet[a] &= rel.row(static_cast<ElementId>(a));
        }
      }
    }
    auto const generated = tolerance_generated_by(alg, pairs);
    CHECK(generated.rows() == meet);
    CHECK(is_tolerance(alg, generated));
  }
}

TEST_CASE("maximal cliques of small relations") {
  SUBCASE("full relation has one block") {
    auto const cov = maximal_cliques(BinaryRelation::full(3));
    REQUIRE(cov.block_count() == 1);
    CHECK(cov.block(0) == ElementSet::full(3));
  }
  SUBCASE("diagonal gives singletons") {
    auto const cov = maximal_cliques(BinaryRelation::diagonal(4));
    REQUIRE(cov.block_count() == 4);
    for (ElementId e = 0; e < 4; ++e) {
      CHECK(cov.block(e) == ElementSet::singleton(4, e));
    }
  }
  SUBCASE("non-disjointness on three points has four blocks") {
    auto const cov = maximal_cliques(nu3());
    std::vector<ElementSet> expected{S1(), S2(), S(), S3()};
    CHECK(cov.blocks() == expected);
  }
}

TEST_CASE("maximal cliques agree with subset enumeration") {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    std::size_t const n = 1 + rng() % 12;
    double const density = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    auto const rel = random_relation(rng, n, density);
    auto const cov = maximal_cliques(rel);
    CHECK(cov.blocks() == brute_force_cliques(rel));
    for (auto const& b : cov.blocks()) {
      CHECK(is_maximal_clique(rel, b));
    }
  }
}

TEST_CASE("induced relations") {
  SUBCASE("2-subsets of three points induce the full relation") {
    Covering pairs(3, {ElementSet::of(3, {0, 1}), ElementSet::of(3, {0, 2}),
                       ElementSet::of(3, {1, 2})});
    CHECK(induced_relation(pairs).same_pairs(BinaryRelation::full(3)));
    CHECK(maximal_cliques(induced_relation(pairs)).block_count() == 1);
  }
  SUBCASE("a partition induces its equivalence relation") {
    Covering part(4, {ElementSet::of(4, {0, 2}), ElementSet::of(4, {1}), ElementSet::of(4, {3})});
    auto const rel = induced_relation(part);
    CHECK(rel.is_transitive());
    CHECK(rel.related(0, 2));
    CHECK(!rel.related(0, 1));
  }
  SUBCASE("principal filters induce non-disjointness") {
    Covering filters(7, {S1(), S2(), S3()});
    CHECK(induced_relation(filters).same_pairs(nu3()));
  }
}

TEST_CASE("induced relation of the maximal cliques recovers the tolerance") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    std::size_t const n = 1 + rng() % 8;
    auto const alg = random_algebra(rng, n, rng() % 2 ? std::vector<std::size_t>{1}
                                                      : std::vector<std::size_t>{1, 2});
    auto const tol = tolerance_generated_by(alg, random_pairs(rng, n, 1 + rng() % 2));
    CHECK(induced_relation(maximal_cliques(tol)).same_pairs(tol));
  }
}

TEST_CASE("full coverings") {
  auto const alg = pow3_plus();
  auto const nu = nu3();
  SUBCASE("principal filters") {
    Covering filters(7, {S1(), S2(), S3()});
    CHECK(is_full_covering(alg, nu, filters));
  }
  SUBCASE("all tolerance blocks") {
    CHECK(is_full_covering(alg, nu, maximal_cliques(nu)));
  }
  SUBCASE("two filters miss the subset {3}") {
    std::vector<ElementSet> two{S1(), S2()};
    auto const v = find_full_covering_violation(alg, nu, two);
    REQUIRE(v.has_value());
    CHECK(v->kind == FullCoveringViolation::Kind::uncovered_element);
    CHECK(v->a == m(4));
  }
  SUBCASE("non-maximal clique") {
    std::vector<ElementSet> blocks{S1(), S2(), S3(), masks(7, {3, 5})};
    auto const v = find_full_covering_violation(alg, nu, blocks);
    REQUIRE(v.has_value());
    CHECK(v->kind == FullCoveringViolation::Kind::not_maximal);
    CHECK(v->block == 3);
  }
  SUBCASE("a block that is a clique but not a maximal one") {
    // Path 0-1-2 under the identity has blocks {0,1} and {1,2}; {2} is not one.
    auto const id = unary_algebra("id", {0, 1, 2});
    std::vector<ElementPair> p{{0, 1}, {1, 2}};
    auto const path = BinaryRelation::from_pairs(3, p);
    CHECK(is_full_covering(id, path, maximal_cliques(path)));
    std::vector<ElementSet> partial{ElementSet::of(3, {0, 1}), ElementSet::of(3, {2})};
    auto const v = find_full_covering_violation(id, path, partial);
    REQUIRE(v.has_value());
    CHECK(v->kind == FullCoveringViolation::Kind::not_maximal);
  }
  SUBCASE("uncovered element") {
    // Two triangles {0,1,2} and {1,2,3} sharing an edge.
    auto const id = unary_algebra("id", {0, 1, 2, 3});
    std::vector<ElementPair> p{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {1, 3}};
    auto const rel = BinaryRelation::from_pairs(4, p);
    std::vector<ElementSet> blocks{ElementSet::of(4, {0, 1, 2})};
    auto const v = find_full_covering_violation(id, rel, blocks);
    REQUIRE(v.has_value());
    CHECK(v->kind == FullCoveringViolation::Kind::uncovered_element);
    CHECK(is_full_covering(id, rel, maximal_cliques(rel)));
  }
  SUBCASE("rejects non-tolerances") {
    auto const s = unary_algebra("s", {1, 2, 0});
    std::vector<ElementPair> p{{0, 1}};
    auto const rel = BinaryRelation::from_pairs(3, p);
    CHECK_THROWS_AS(find_full_covering_violation(s, rel, maximal_cliques(rel)), NotATolerance);
  }
}

TEST_CASE("the relation induced by a proper subfamily of blocks can differ") {
  // 4-cycle 0-1-2-3-0 has blocks {0,1},{1,2},{2,3},{0,3}; three of them
  // cover every element but lose the pair (0,3).
  auto const id = unary_algebra("id", {0, 1, 2, 3});
  std::vector<ElementPair> p{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  auto const cycle = BinaryRelation::from_pairs(4, p);
  std::vector<ElementSet> three{ElementSet::of(4, {0, 1}), ElementSet::of(4, {1, 2}),
                                ElementSet::of(4, {2, 3})};
  auto const v = find_full_covering_violation(id, cycle, three);
  REQUIRE(v.has_value());
  CHECK(v->kind == FullCoveringViolation::Kind::missing_pair);
  CHECK(v->a == 0);
  CHECK(v->b == 3);
}

TEST_CASE("non-disjointness relation") {
  auto const nu = nondisjointness(3);
  CHECK(nu.same_pairs(nu3()));
  CHECK(nu.related(m(3), m(5)));
  CHECK(!nu.related(m(1), m(6)));
  for (ElementId e = 0; e < 7; ++e) {
    CHECK(nu.related(e, e));
  }
  auto const triangle = masks(7, {3, 5, 6});
  CHECK(is_clique(nu, triangle));
  auto const filters = principal_filter_covering(3);
  for (auto const& filter : filters.blocks()) {
    CHECK(!triangle.is_subset_of(filter));
  }
  CHECK(nu.names()[m(3)] == "12");
  CHECK_THROWS_AS(nondisjointness(17), LimitError);
  CHECK_THROWS_AS(nondisjointness(0), ArgumentError);
}

TEST_CASE("principal filters are exactly the principal maximal cliques") {
  for (unsigned mm = 1; mm <= 5; ++mm) {
    auto const nu = nondisjointness(mm);
    auto const cliques = maximal_cliques(nu);
    std::size_t principal = 0;
    for (auto const& block : cliques.blocks()) {
      bool is_filter = false;
      for (unsigned k = 0; k < mm; ++k) {
        ElementSet filter(nu.size());
        for (std::uint64_t mask = 1; mask <= powerset::top_mask(mm); ++mask) {
          if ((mask >> k) & 1U) {
            filter.set(powerset::element_of(mask));
          }
        }
        is_filter = is_filter || block == filter;
      }
      principal += is_filter ? 1 : 0;
    }
    CHECK(principal == mm);
    CHECK((cliques.block_count() > mm) == (mm >= 3));
  }
}
