#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tolquot/element_set.hpp"
#include "tolquot/errors.hpp"
#include "tolquot/structures.hpp"

namespace tolquot {

using ElementPair = std::pair<ElementId, ElementId>;

// Reflexive, symmetric relation stored as one adjacency row per element.
class BinaryRelation {
 public:
  enum class Closure {
    close,   // add the diagonal and missing orientations
    strict,  // reject relations that are not already reflexive and symmetric
  };

  // Rows must be reflexive and symmetric; throws InvariantError otherwise.
  explicit BinaryRelation(std::vector<ElementSet> rows, std::vector<std::string> names = {});

  static BinaryRelation diagonal(std::size_t n);
  static BinaryRelation full(std::size_t n);
  static BinaryRelation from_pairs(std::size_t n, std::span<ElementPair const> pairs,
                                   Closure closure = Closure::close,
                                   std::vector<std::string> names = {});

  std::size_t size() const noexcept { return rows_.size(); }
  bool related(ElementId a, ElementId b) const noexcept { return rows_[a].test(b); }
  ElementSet const& row(ElementId a) const { return rows_[a]; }
  std::vector<ElementSet> const& rows() const noexcept { return rows_; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string display_name(ElementId e) const;

  // All (a, b) with a related to b, both orientations and the diagonal,
  // in lexicographic order.
  std::vector<ElementPair> pairs() const;
  bool is_transitive() const;
  // Same pairs; names ignored.
  bool same_pairs(BinaryRelation const& other) const noexcept { return rows_ == other.rows_; }

  friend bool operator==(BinaryRelation const&, BinaryRelation const&) = default;

 private:
  std::vector<ElementSet> rows_;
  std::vector<std::string> names_;
};

// Nonempty, pairwise incomparable blocks whose union is the universe,
// sorted by ascending bitset value.
class Covering {
 public:
  Covering(std::size_t universe_size, std::vector<ElementSet> blocks,
           std::vector<std::string> names = {});

  std::size_t universe_size() const noexcept { return size_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::vector<ElementSet> const& blocks() const noexcept { return blocks_; }
  ElementSet const& block(std::size_t i) const { return blocks_[i]; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string display_name(ElementId e) const;

  std::optional<std::size_t> index_of(ElementSet const& block) const;
  // Indices of blocks containing e, as a set over {0..block_count-1}.
  ElementSet blocks_containing(ElementId e) const;

  friend bool operator==(Covering const&, Covering const&) = default;

 private:
  std::size_t size_;
  std::vector<ElementSet> blocks_;
  std::vector<std::string> names_;
};

// Reason a block family is not a covering, or nullopt if it is one.
std::optional<std::string> covering_defect(std::size_t universe_size,
                                           std::span<ElementSet const> blocks);

// First failure of the Substitution Property, in (operation, lhs, rhs)
// lexicographic order.
struct SubstitutionViolation {
  std::string op;
  std::vector<ElementId> lhs;
  std::vector<ElementId> rhs;
  ElementId lhs_image = 0;
  ElementId rhs_image = 0;

  friend bool operator==(SubstitutionViolation const&, SubstitutionViolation const&) = default;
};

std::string describe(SubstitutionViolation const& v);

class NotATolerance : public Error {
 public:
  explicit NotATolerance(SubstitutionViolation witness)
      : Error("relation is not a tolerance: " + describe(witness)), witness_(std::move(witness)) {}
  SubstitutionViolation const& witness() const noexcept { return witness_; }

 private:
  SubstitutionViolation witness_;
};

std::optional<SubstitutionViolation> find_substitution_violation(FiniteAlgebra const& alg,
                                                                 BinaryRelation const& rel);
inline bool is_tolerance(FiniteAlgebra const& alg, BinaryRelation const& rel) {
  return !find_substitution_violation(alg, rel).has_value();
}
// Throws NotATolerance (or ArgumentError on size mismatch).
void require_tolerance(FiniteAlgebra const& alg, BinaryRelation const& rel);

// Inclusion-least tolerance containing `pairs`.
BinaryRelation tolerance_generated_by(FiniteAlgebra const& alg,
                                      std::span<ElementPair const> pairs);

bool is_clique(BinaryRelation const& rel, ElementSet const& s);
bool is_maximal_clique(BinaryRelation const& rel, ElementSet const& s);

// All inclusion-maximal cliques (Bron-Kerbosch with pivoting), canonically
// sorted. Display names carry over from `rel`.
Covering maximal_cliques(BinaryRelation const& rel);

// a ~ b iff some block contains both.
BinaryRelation induced_relation(Covering const& cov);

struct FullCoveringViolation {
  enum class Kind {
    empty_block,
    not_a_clique,        // block contains an unrelated pair (a, b)
    not_maximal,         // block plus element `a` is still a clique
    comparable_blocks,   // block `block` is contained in block `other`
    uncovered_element,   // element `a` lies in no block
    missing_pair,        // (a, b) in the relation but in no common block
  };
  Kind kind;
  std::size_t block = 0;
  std::size_t other = 0;
  ElementId a = 0;
  ElementId b = 0;

  friend bool operator==(FullCoveringViolation const&, FullCoveringViolation const&) = default;
};

std::string describe(FullCoveringViolation const& v);
char const* kind_name(FullCoveringViolation::Kind kind);

class NotFullCovering : public Error {
 public:
  explicit NotFullCovering(FullCoveringViolation witness)
      : Error("not a full covering: " + describe(witness)), witness_(witness) {}
  FullCoveringViolation const& witness() const noexcept { return witness_; }

 private:
  FullCoveringViolation witness_;
};

// Checks, in order: every block is a maximal clique of `rel`; the blocks form
// a covering; the induced relation equals `rel`. Throws NotATolerance if
// `rel` is not a tolerance on `alg`.
std::optional<FullCoveringViolation> find_full_covering_violation(
    FiniteAlgebra const& alg, BinaryRelation const& rel, std::span<ElementSet const> blocks);
std::optional<FullCoveringViolation> find_full_covering_violation(FiniteAlgebra const& alg,
                                                                  BinaryRelation const& rel,
                                                                  Covering const& cov);
inline bool is_full_covering(FiniteAlgebra const& alg, BinaryRelation const& rel,
                             Covering const& cov) {
  return !find_full_covering_violation(alg, rel, cov).has_value();
}

inline constexpr unsigned default_nondisjointness_limit = 16;

// Non-disjointness relation on the nonempty subsets of {0..m-1}; element k
// is the subset with mask k+1.
BinaryRelation nondisjointness(unsigned m, unsigned limit = default_nondisjointness_limit);

}  // namespace tolquot
