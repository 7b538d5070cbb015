#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tolquot/element_set.hpp"

namespace tolquot::powerset {

// The nonempty subsets of {0..m-1} are encoded as masks 1..2^m-1; the
// universe element for mask k is k-1.
inline std::size_t universe_size(unsigned m) { return (std::size_t{1} << m) - 1; }
inline ElementId element_of(std::uint64_t mask) { return static_cast<ElementId>(mask - 1); }
inline std::uint64_t mask_of(ElementId e) { return std::uint64_t{e} + 1; }
inline std::uint64_t top_mask(unsigned m) { return (std::uint64_t{1} << m) - 1; }

// Subset label with 1-based members: "13" for {0,2} when m <= 9,
// "{1,10}" style otherwise.
std::string subset_label(std::uint64_t mask, unsigned m);
std::vector<std::string> subset_labels(unsigned m);

}  // namespace tolquot::powerset
