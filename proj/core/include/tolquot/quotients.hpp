#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tolquot/errors.hpp"
#include "tolquot/relations.hpp"
#include "tolquot/structures.hpp"

namespace tolquot {

struct QuotientOptions {
  // Maximum number of representative tuples evaluated for a single value.
  std::uint64_t budget = 10'000'000;
  // Worker threads for independent block tuples. Output does not depend on it.
  unsigned jobs = 1;
};

enum class Construction { tolerance, full_covering };
char const* construction_name(Construction c);

// A quotient multi-algebra whose element i is blocks.block(i).
struct QuotientResult {
  MultiAlgebra quotient;
  Covering blocks;
  Construction construction;
};

class EmptyValue : public Error {
 public:
  EmptyValue(std::string op, std::vector<std::size_t> block_tuple);
  std::string const& op() const noexcept { return op_; }
  std::vector<std::size_t> const& block_tuple() const noexcept { return block_tuple_; }

 private:
  std::string op_;
  std::vector<std::size_t> block_tuple_;
};

// Multi-algebra on the maximal cliques of `tol`: f(B1..Bn) is the set of
// blocks B with f(b1..bn) in B for every choice of bi in Bi.
QuotientResult tolerance_quotient(FiniteAlgebra const& alg, BinaryRelation const& tol,
                                  QuotientOptions const& options = {});

// Same evaluation restricted to the blocks of a full covering. Throws
// NotFullCovering, or EmptyValue when some value has no block.
QuotientResult full_covering_quotient(FiniteAlgebra const& alg, BinaryRelation const& tol,
                                      Covering const& cov, QuotientOptions const& options = {});

// A block tuple whose representative images land in `block` for some choice
// of representatives (`tuple_in`) but not for another (`tuple_out`).
struct DeterminacyCounterWitness {
  std::string op;
  std::vector<std::size_t> block_tuple;
  std::size_t block = 0;
  std::vector<ElementId> tuple_in;
  std::vector<ElementId> tuple_out;

  friend bool operator==(DeterminacyCounterWitness const&,
                         DeterminacyCounterWitness const&) = default;
};

// nullopt means every block tuple is determinate: membership of an image in
// a block does not depend on the chosen representatives. Operations, block
// tuples and blocks are scanned in canonical order; the first counter
// witness is returned.
std::optional<DeterminacyCounterWitness> check_block_determinacy(
    FiniteAlgebra const& alg, BinaryRelation const& tol, QuotientOptions const& options = {});

std::string describe(DeterminacyCounterWitness const& w, Covering const& blocks);

}  // namespace tolquot

namespace tolquot {

// First (algebra, tolerance) pair on which determinacy fails.
struct DeterminacyCounterexample {
  FiniteAlgebra algebra;
  BinaryRelation tolerance;
  DeterminacyCounterWitness witness;
};

struct DeterminacySweepReport {
  std::size_t max_size = 0;
  std::uint64_t algebras = 0;
  std::uint64_t relations = 0;
  std::uint64_t tolerances = 0;
  std::uint64_t determinate = 0;
  std::uint64_t counterexamples = 0;
  std::optional<DeterminacyCounterexample> first;
};

// Runs check_block_determinacy over every unary algebra on {0..n-1} for
// n <= max_size and every tolerance of it. Algebras go in lexicographic
// table order, relations in ascending order of their edge bitmask (pair
// (i,j), i<j, enumerated lexicographically, is bit e).
DeterminacySweepReport sweep_unary_determinacy(std::size_t max_size);

}  // namespace tolquot
