#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tolquot/relations.hpp"
#include "tolquot/structures.hpp"

namespace tolquot {

using Structure = std::variant<FiniteAlgebra, MultiAlgebra, BinaryRelation, Covering>;

struct ParseOptions {
  // Reject relations that list only one orientation of a pair or omit the
  // diagonal, instead of closing them.
  bool strict_relations = false;
};

// Parses the JSON structure format. Throws ParseError for malformed text
// and InvariantError for structures that violate their invariants.
Structure parse_structure(std::string_view text, ParseOptions const& options = {});

// Canonical text: sorted keys, operations sorted by name, set members
// ascending, relation pairs listed in both orientations.
std::string serialize_structure(Structure const& s);
std::string serialize(FiniteAlgebra const& s);
std::string serialize(MultiAlgebra const& s);
std::string serialize(BinaryRelation const& s);
std::string serialize(Covering const& s);

// A "covering" file read without the covering invariants, for checks that
// report why a block family fails to be a covering.
struct BlockFamily {
  std::size_t universe_size = 0;
  std::vector<ElementSet> blocks;
};
BlockFamily parse_block_family(std::string_view text);

char const* kind_of(Structure const& s);

template <typename T>
T parse_as(std::string_view text, ParseOptions const& options = {});

}  // namespace tolquot
