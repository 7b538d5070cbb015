#include "tolquot/realization.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "tolquot/iso_search.hpp"
#include "tolquot/powerset.hpp"

namespace tolquot {

namespace {

constexpr std::size_t hard_limit = 20;

void check_limit(std::size_t m_size, std::size_t size_limit) {
  std::size_t const limit = std::min(size_limit, hard_limit);
  if (m_size > limit) {
    throw LimitError("multi-algebra has " + std::to_string(m_size)
                     + " elements; the power-set construction is limited to "
                     + std::to_string(limit));
  }
}

}  // namespace

FiniteAlgebra powerset_algebra(MultiAlgebra const& m, std::size_t size_limit) {
  check_limit(m.size(), size_limit);
  auto const bits = static_cast<unsigned>(m.size());
  std::size_t const n = powerset::universe_size(bits);
  ElementId const top = powerset::element_of(powerset::top_mask(bits));

  // singleton_of[e] = k when element e is the subset {k}, else -1.
  std::vector<int> singleton_of(n, -1);
  for (unsigned k = 0; k < bits; ++k) {
    singleton_of[powerset::element_of(std::uint64_t{1} << k)] = static_cast<int>(k);
  }

  std::vector<NamedTable<OperationTable>> ops;
  for (std::size_t op = 0; op < m.signature().size(); ++op) {
    std::size_t const arity = m.signature()[op].arity;
    std::size_t const count = tuple_count(n, arity);
    OperationTable table{arity, std::vector<ElementId>(count, top)};
    std::vector<ElementId> args(arity, 0);
    std::vector<ElementId> source_args(arity, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      decode_tuple(n, idx, args);
      bool all_singletons = true;
      for (std::size_t i = 0; i < arity && all_singletons; ++i) {
        int const s = singleton_of[args[i]];
        all_singletons = s >= 0;
        if (all_singletons) {
          source_args[i] = static_cast<ElementId>(s);
        }
      }
      if (all_singletons) {
        table.entries[idx] = powerset::element_of(m.apply(op, source_args).low_word());
      }
    }
    ops.push_back({m.signature()[op].name, std::move(table)});
  }
  return FiniteAlgebra(n, std::move(ops), powerset::subset_labels(bits));
}

Covering principal_filter_covering(std::size_t m_size) {
  if (m_size == 0) {
    throw ArgumentError("principal filter covering needs at least one element");
  }
  check_limit(m_size, hard_limit);
  auto const bits = static_cast<unsigned>(m_size);
  std::size_t const n = powerset::universe_size(bits);
  std::vector<ElementSet> blocks;
  for (unsigned k = 0; k < bits; ++k) {
    ElementSet block(n);
    for (std::uint64_t mask = 1; mask <= powerset::top_mask(bits); ++mask) {
      if ((mask >> k) & 1U) {
        block.set(powerset::element_of(mask));
      }
    }
    blocks.push_back(std::move(block));
  }
  return Covering(n, std::move(blocks), powerset::subset_labels(bits));
}

RealizationBundle realize(MultiAlgebra const& m, RealizationOptions const& options) {
  FiniteAlgebra power = powerset_algebra(m, options.size_limit);
  auto const bits = static_cast<unsigned>(m.size());
  BinaryRelation nu = nondisjointness(bits, static_cast<unsigned>(hard_limit));
  Covering filters = principal_filter_covering(m.size());

  // Block k of the canonical order must be the filter of element k.
  for (std::size_t k = 0; k < filters.block_count(); ++k) {
    if (!filters.block(k).test(powerset::element_of(std::uint64_t{1} << k))) {
      throw VerificationFailure("principal filters are not in element order");
    }
  }
  if (auto v = find_substitution_violation(power, nu)) {
    throw VerificationFailure("non-disjointness is not a tolerance on the power-set algebra: "
                              + describe(*v));
  }
  if (auto v = find_full_covering_violation(power, nu, filters)) {
    throw VerificationFailure("principal filters are not a full covering: " + describe(*v));
  }

  QuotientResult quotient = [&] {
    try {
      return full_covering_quotient(power, nu, filters, options.quotient);
    } catch (EmptyValue const& e) {
      throw VerificationFailure(std::string("realization produced an empty value: ") + e.what());
    }
  }();

  std::vector<ElementId> iso(m.size());
  std::iota(iso.begin(), iso.end(), ElementId{0});
  if (!is_isomorphism(quotient.quotient, m, iso)) {
    throw VerificationFailure("the map from principal filters to elements is not an isomorphism");
  }

  return RealizationBundle{m,
                           std::move(power),
                           std::move(nu),
                           std::move(filters),
                           std::move(quotient),
                           std::move(iso)};
}

}  // namespace tolquot
