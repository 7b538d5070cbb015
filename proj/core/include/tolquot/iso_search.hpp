#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tolquot/errors.hpp"
#include "tolquot/quotients.hpp"
#include "tolquot/relations.hpp"
#include "tolquot/structures.hpp"

namespace tolquot {

// mapping[e] is the image of e; a bijection commuting with every
// multi-operation elementwise on value sets.
struct IsoWitness {
  std::vector<ElementId> mapping;

  friend bool operator==(IsoWitness const&, IsoWitness const&) = default;
};

// Throws ArgumentError if the signatures differ.
std::optional<IsoWitness> are_isomorphic(MultiAlgebra const& lhs, MultiAlgebra const& rhs);

bool is_isomorphism(MultiAlgebra const& lhs, MultiAlgebra const& rhs,
                    std::span<ElementId const> mapping);

struct RepresentationWitness {
  FiniteAlgebra algebra;
  BinaryRelation tolerance;
  Covering covering;
  // From quotient blocks (canonical order) to target elements.
  IsoWitness iso;
};

struct SearchStats {
  std::size_t bound = 0;
  std::uint64_t relations_examined = 0;
  std::uint64_t relations_accepted = 0;
  std::uint64_t coverings_examined = 0;
  std::uint64_t bijections_examined = 0;
  std::uint64_t table_nodes = 0;
  std::uint64_t fourth_clique_prunes = 0;
  std::uint64_t region_prunes = 0;
  std::uint64_t witness_size = 0;
  double wall_seconds = 0.0;
};

struct SearchOutcome {
  std::optional<RepresentationWitness> witness;
  SearchStats stats;

  bool exhausted() const noexcept { return !witness.has_value(); }
};

struct SearchOptions {
  // Largest permitted bound; 0 picks a default from the target's signature.
  std::size_t size_limit = 0;
  // Table-search nodes allowed before giving up with SearchBudgetExceeded.
  std::uint64_t node_budget = 4'000'000'000ULL;
  unsigned jobs = 1;
};

enum class SearchKind { tolerance, full_covering };

std::size_t default_search_limit(Signature const& sig, SearchKind kind);

class SearchBudgetExceeded : public ResourceExceeded {
 public:
  explicit SearchBudgetExceeded(SearchStats progress)
      : ResourceExceeded("search budget exceeded"), progress_(progress) {}
  SearchStats const& progress() const noexcept { return progress_; }

 private:
  SearchStats progress_;
};

// Searches algebras A with |A| <= max_size and tolerances on them whose
// tolerance quotient is isomorphic to `target`. An empty witness means the
// whole space up to the bound was covered.
SearchOutcome find_tolerance_representation(MultiAlgebra const& target, std::size_t max_size,
                                            SearchOptions const& options = {});

// As above with full covering quotients; the covering is part of the search.
SearchOutcome find_full_covering_representation(MultiAlgebra const& target, std::size_t max_size,
                                                SearchOptions const& options = {});

// Rebuilds the quotient from the witness fields and checks the isomorphism.
bool replay(RepresentationWitness const& witness, MultiAlgebra const& target, SearchKind kind);

// Given maximal cliques B, C, D of `rel` and x in (B∩C)-D, y in (B∩D)-C,
// z in (C∩D)-B, returns {x, y, z}: a clique contained in none of B, C, D.
// Throws ArgumentError naming the first failed precondition.
ElementSet derive_fourth_clique(BinaryRelation const& rel, ElementSet const& b,
                                ElementSet const& c, ElementSet const& d, ElementId x,
                                ElementId y, ElementId z);

}  // namespace tolquot
