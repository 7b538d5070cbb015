#pragma once

#include <cstddef>
#include <vector>

#include "tolquot/quotients.hpp"
#include "tolquot/relations.hpp"
#include "tolquot/structures.hpp"

namespace tolquot {

inline constexpr std::size_t default_realization_limit = 12;

struct RealizationOptions {
  std::size_t size_limit = default_realization_limit;
  QuotientOptions quotient;
};

// Witness that `source` is a full covering quotient of its power-set algebra.
struct RealizationBundle {
  MultiAlgebra source;
  FiniteAlgebra power_algebra;
  BinaryRelation nu;
  Covering filters;
  QuotientResult quotient;
  // iso[k] is the source element for quotient block k.
  std::vector<ElementId> iso;
};

// Algebra on the nonempty subsets of M: an all-singleton argument tuple
// ({m1},...,{mn}) maps to the subset f(m1,...,mn); every other tuple maps to
// M itself. A nullary f maps to the subset f().
FiniteAlgebra powerset_algebra(MultiAlgebra const& m,
                               std::size_t size_limit = default_realization_limit);

// Block k is the principal filter of element k: every subset containing k.
Covering principal_filter_covering(std::size_t m_size);

// Builds and verifies the whole bundle. Throws LimitError for oversized
// input and VerificationFailure if any step of the construction fails to
// check out.
RealizationBundle realize(MultiAlgebra const& m, RealizationOptions const& options = {});

}  // namespace tolquot
