#include "tolquot/structure_io.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace tolquot {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(std::string const& where, std::string const& what) {
  throw InvariantError(where + ": " + what);
}

json const& member(json const& obj, char const* key, std::string const& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(where, std::string("missing key \"") + key + "\"");
  }
  return *it;
}

std::size_t read_count(json const& j, std::string const& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    schema_error(where, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

ElementId read_index(json const& j, std::size_t n, std::string const& where) {
  std::size_t const v = read_count(j, where);
  if (v >= n) {
    schema_error(where, "index " + std::to_string(v) + " out of range for size "
                            + std::to_string(n));
  }
  return static_cast<ElementId>(v);
}

// Sorted, duplicate-free index list.
ElementSet read_set(json const& j, std::size_t n, std::string const& where) {
  if (!j.is_array()) {
    schema_error(where, "expected an array of indices");
  }
  ElementSet out(n);
  long long previous = -1;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ElementId const e = read_index(j[i], n, where + "[" + std::to_string(i) + "]");
    if (static_cast<long long>(e) <= previous) {
      schema_error(where, "members must be sorted and duplicate-free");
    }
    previous = e;
    out.set(e);
  }
  return out;
}

void check_keys(json const& obj, std::initializer_list<char const*> allowed,
                std::string const& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](char const* k) { return it.key() == k; })) {
      schema_error(where, "unexpected key \"" + it.key() + "\"");
    }
  }
}

std::string tuple_text(std::size_t n, std::size_t arity, std::size_t index) {
  auto t = decode_tuple(n, arity, index);
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + std::to_string(t[i]);
  }
  return out + ")";
}

struct Header {
  std::string kind;
  std::size_t size = 0;
  std::vector<std::string> names;
};

Header read_header(json const& doc) {
  if (!doc.is_object()) {
    schema_error("document", "expected a JSON object");
  }
  Header h;
  auto const& kind = member(doc, "kind", "document");
  if (!kind.is_string()) {
    schema_error("kind", "expected a string");
  }
  h.kind = kind.get<std::string>();
  h.size = read_count(member(doc, "size", "document"), "size");
  if (h.size == 0) {
    schema_error("size", "universe must be nonempty");
  }
  if (auto it = doc.find("names"); it != doc.end()) {
    if (!it->is_array() || it->size() != h.size) {
      schema_error("names", "expected an array of " + std::to_string(h.size) + " strings");
    }
    for (auto const& s : *it) {
      if (!s.is_string()) {
        schema_error("names", "expected strings");
      }
      h.names.push_back(s.get<std::string>());
    }
  }
  return h;
}

template <typename Entry, typename ReadEntry>
std::vector<NamedTable<Entry>> read_operations(json const& doc, std::size_t n,
                                               ReadEntry read_entry) {
  auto const& ops = member(doc, "operations", "document");
  if (!ops.is_array()) {
    schema_error("operations", "expected an array");
  }
  std::vector<NamedTable<Entry>> out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    std::string const where = "operations[" + std::to_string(i) + "]";
    auto const& op = ops[i];
    if (!op.is_object()) {
      schema_error(where, "expected an object");
    }
    check_keys(op, {"name", "arity", "table"}, where);
    auto const& name = member(op, "name", where);
    if (!name.is_string()) {
      schema_error(where + ".name", "expected a string");
    }
    std::string const op_name = name.get<std::string>();
    std::size_t const arity = read_count(member(op, "arity", where), where + ".arity");
    auto const& table = member(op, "table", where);
    if (!table.is_array()) {
      schema_error(where + ".table", "expected an array");
    }
    std::size_t const expected = tuple_count(n, arity);
    if (table.size() != expected) {
      schema_error("operation '" + op_name + "'",
                   "table has " + std::to_string(table.size()) + " entries, expected "
                       + std::to_string(expected));
    }
    Entry entry{arity, {}};
    entry.entries.reserve(expected);
    for (std::size_t t = 0; t < expected; ++t) {
      entry.entries.push_back(
          read_entry(table[t], "operation '" + op_name + "' at " + tuple_text(n, arity, t)));
    }
    out.push_back({op_name, std::move(entry)});
  }
  return out;
}

void write_names(std::string& out, std::vector<std::string> const& names) {
  if (names.empty()) {
    return;
  }
  out += "  \"names\": [";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += (i ? ", " : "") + json(names[i]).dump();
  }
  out += "],\n";
}

void write_set(std::string& out, ElementSet const& s) {
  out += '[';
  bool first = true;
  s.for_each([&](ElementId e) {
    out += (first ? "" : ", ") + std::to_string(e);
    first = false;
  });
  out += ']';
}

template <typename Alg, typename WriteEntry>
std::string write_algebra(char const* kind, Alg const& alg, WriteEntry write_entry) {
  std::string out = "{\n  \"kind\": \"";
  out += kind;
  out += "\",\n";
  write_names(out, alg.names());
  out += "  \"operations\": [";
  auto const& sig = alg.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    out += op ? ",\n" : "\n";
    out += "    {\"arity\": " + std::to_string(sig[op].arity)
           + ", \"name\": " + json(sig[op].name).dump() + ", \"table\": [";
    auto const& entries = alg.table(op).entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) {
        out += ", ";
      }
      write_entry(out, entries[i]);
    }
    out += "]}";
  }
  out += sig.size() ? "\n  ],\n" : "],\n";
  out += "  \"size\": " + std::to_string(alg.size()) + "\n}\n";
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (json::parse_error const& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
}

std::vector<ElementSet> read_blocks(json const& doc, std::size_t n) {
  auto const& blocks = member(doc, "blocks", "document");
  if (!blocks.is_array()) {
    schema_error("blocks", "expected an array");
  }
  std::vector<ElementSet> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.push_back(read_set(blocks[i], n, "blocks[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

Structure parse_structure(std::string_view text, ParseOptions const& options) {
  json const doc = parse_json(text);
  Header h = read_header(doc);
  std::size_t const n = h.size;

  if (h.kind == "algebra") {
    check_keys(doc, {"kind", "size", "names", "operations"}, "document");
    auto ops = read_operations<OperationTable>(
        doc, n, [&](json const& j, std::string const& where) { return read_index(j, n, where); });
    return FiniteAlgebra(n, std::move(ops), std::move(h.names));
  }
  if (h.kind == "multialgebra") {
    check_keys(doc, {"kind", "size", "names", "operations"}, "document");
    auto ops = read_operations<MultiOperationTable>(
        doc, n, [&](json const& j, std::string const& where) {
          ElementSet s = read_set(j, n, where);
          if (s.empty()) {
            throw InvariantError("empty multi-operation value: " + where);
          }
          return s;
        });
    return MultiAlgebra(n, std::move(ops), std::move(h.names));
  }
  if (h.kind == "relation") {
    check_keys(doc, {"kind", "size", "names", "pairs"}, "document");
    auto const& pairs = member(doc, "pairs", "document");
    if (!pairs.is_array()) {
      schema_error("pairs", "expected an array");
    }
    std::vector<ElementPair> list;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::string const where = "pairs[" + std::to_string(i) + "]";
      if (!pairs[i].is_array() || pairs[i].size() != 2) {
        schema_error(where, "expected [i, j]");
      }
      list.emplace_back(read_index(pairs[i][0], n, where), read_index(pairs[i][1], n, where));
    }
    return BinaryRelation::from_pairs(n, list,
                                      options.strict_relations ? BinaryRelation::Closure::strict
                                                               : BinaryRelation::Closure::close,
                                      std::move(h.names));
  }
  if (h.kind == "covering") {
    check_keys(doc, {"kind", "size", "names", "blocks"}, "document");
    return Covering(n, read_blocks(doc, n), std::move(h.names));
  }
  schema_error("kind", "unknown structure kind \"" + h.kind + "\"");
}

BlockFamily parse_block_family(std::string_view text) {
  json const doc = parse_json(text);
  Header h = read_header(doc);
  if (h.kind != "covering") {
    schema_error("kind", "expected \"covering\", got \"" + h.kind + "\"");
  }
  check_keys(doc, {"kind", "size", "names", "blocks"}, "document");
  return BlockFamily{h.size, read_blocks(doc, h.size)};
}

std::string serialize(FiniteAlgebra const& s) {
  return write_algebra("algebra", s,
                       [](std::string& out, ElementId e) { out += std::to_string(e); });
}

std::string serialize(MultiAlgebra const& s) {
  return write_algebra("multialgebra", s,
                       [](std::string& out, ElementSet const& e) { write_set(out, e); });
}

std::string serialize(BinaryRelation const& s) {
  std::string out = "{\n  \"kind\": \"relation\",\n";
  write_names(out, s.names());
  out += "  \"pairs\": [";
  bool first = true;
  for (auto [a, b] : s.pairs()) {
    out += (first ? "" : ", ") + ("[" + std::to_string(a) + ", " + std::to_string(b) + "]");
    first = false;
  }
  out += "],\n  \"size\": " + std::to_string(s.size()) + "\n}\n";
  return out;
}

std::string serialize(Covering const& s) {
  std::string out = "{\n  \"blocks\": [";
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    if (i) {
      out += ", ";
    }
    write_set(out, s.block(i));
  }
  out += "],\n  \"kind\": \"covering\",\n";
  write_names(out, s.names());
  out += "  \"size\": " + std::to_string(s.universe_size()) + "\n}\n";
  return out;
}

std::string serialize_structure(Structure const& s) {
  return std::visit([](auto const& v) { return serialize(v); }, s);
}

char const* kind_of(Structure const& s) {
  static constexpr char const* kinds[] = {"algebra", "multialgebra", "relation", "covering"};
  return kinds[s.index()];
}

template <typename T>
T parse_as(std::string_view text, ParseOptions const& options) {
  Structure s = parse_structure(text, options);
  if (auto* v = std::get_if<T>(&s)) {
    return std::move(*v);
  }
  static constexpr char const* expected = std::is_same_v<T, FiniteAlgebra>    ? "algebra"
                                          : std::is_same_v<T, MultiAlgebra>   ? "multialgebra"
                                          : std::is_same_v<T, BinaryRelation> ? "relation"
                                                                              : "covering";
  throw InvariantError(std::string("expected a structure of kind \"") + expected + "\", got \""
                       + kind_of(s) + "\"");
}

template FiniteAlgebra parse_as<FiniteAlgebra>(std::string_view, ParseOptions const&);
template MultiAlgebra parse_as<MultiAlgebra>(std::string_view, ParseOptions const&);
template BinaryRelation parse_as<BinaryRelation>(std::string_view, ParseOptions const&);
template Covering parse_as<Covering>(std::string_view, ParseOptions const&);

}  // namespace tolquot
