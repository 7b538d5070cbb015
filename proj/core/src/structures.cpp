#include "tolquot/structures.hpp"

#include <algorithm>
#include <limits>

#include "tolquot/errors.hpp"

namespace tolquot {

namespace {

std::string tuple_text(std::size_t n, std::size_t arity, std::size_t index) {
  auto t = decode_tuple(n, arity, index);
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + std::to_string(t[i]);
  }
  return out + ")";
}

template <typename Table>
Signature signature_of(std::vector<NamedTable<Table>>& ops) {
  std::sort(ops.begin(), ops.end(),
            [](auto const& a, auto const& b) { return a.name < b.name; });
  std::vector<OperationSymbol> symbols;
  symbols.reserve(ops.size());
  for (auto const& op : ops) {
    symbols.push_back({op.name, op.table.arity});
  }
  return Signature(std::move(symbols));
}

void check_names(std::size_t size, std::vector<std::string> const& names) {
  if (size == 0) {
    throw InvariantError("universe must be nonempty");
  }
  if (!names.empty() && names.size() != size) {
    throw InvariantError("expected " + std::to_string(size) + " names, got "
                         + std::to_string(names.size()));
  }
}

std::string display(std::vector<std::string> const& names, ElementId e) {
  return names.empty() ? std::to_string(e) : names[e];
}

std::size_t find_op(Signature const& sig, std::string_view name) {
  auto i = sig.find(name);
  if (!i) {
    throw ArgumentError("unknown operation '" + std::string(name) + "'");
  }
  return *i;
}

void check_args(Signature const& sig, std::size_t op, std::size_t n,
                std::span<ElementId const> args) {
  if (args.size() != sig[op].arity) {
    throw ArgumentError("operation '" + sig[op].name + "' has arity "
                        + std::to_string(sig[op].arity) + ", got "
                        + std::to_string(args.size()) + " arguments");
  }
  for (ElementId a : args) {
    if (a >= n) {
      throw ArgumentError("argument " + std::to_string(a) + " outside universe of size "
                          + std::to_string(n));
    }
  }
}

}  // namespace

Signature::Signature(std::vector<OperationSymbol> symbols) : symbols_(std::move(symbols)) {
  std::sort(symbols_.begin(), symbols_.end(),
            [](auto const& a, auto const& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto const& name = symbols_[i].name;
    if (name.empty()) {
      throw InvariantError("operation name must be nonempty");
    }
    if (std::any_of(name.begin(), name.end(),
                    [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n'
                                                 || c == '\r' || c == '\f' || c == '\v'; })) {
      throw InvariantError("operation name '" + name + "' contains whitespace");
    }
    if (i > 0 && symbols_[i - 1].name == name) {
      throw InvariantError("duplicate operation name '" + name + "'");
    }
  }
}

std::optional<std::size_t> Signature::find(std::string_view name) const noexcept {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name,
                             [](auto const& s, std::string_view n) { return s.name < n; });
  if (it == symbols_.end() || it->name != name) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t Signature::max_arity() const noexcept {
  std::size_t m = 0;
  for (auto const& s : symbols_) {
    m = std::max(m, s.arity);
  }
  return m;
}

std::size_t tuple_count(std::size_t universe_size, std::size_t arity) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (universe_size != 0 && count > std::numeric_limits<std::size_t>::max() / universe_size) {
      throw LimitError("operation table too large");
    }
    count *= universe_size;
  }
  return count;
}

std::size_t encode_tuple(std::size_t universe_size, std::span<ElementId const> tuple) {
  std::size_t index = 0;
  for (ElementId t : tuple) {
    index = index * universe_size + t;
  }
  return index;
}

void decode_tuple(std::size_t universe_size, std::size_t index, std::span<ElementId> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<ElementId>(index % universe_size);
    index /= universe_size;
  }
}

std::vector<ElementId> decode_tuple(std::size_t universe_size, std::size_t arity,
                                    std::size_t index) {
  std::vector<ElementId> out(arity);
  decode_tuple(universe_size, index, out);
  return out;
}

bool next_tuple(std::span<ElementId> tuple, std::size_t universe_size) noexcept {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < universe_size) {
      return true;
    }
    tuple[i] = 0;
  }
  return false;
}

FiniteAlgebra::FiniteAlgebra(std::size_t size, std::vector<NamedTable<OperationTable>> operations,
                             std::vector<std::string> names)
    : size_(size), names_(std::move(names)) {
  check_names(size_, names_);
  signature_ = signature_of(operations);
  tables_.reserve(operations.size());
  for (auto& op : operations) {
    std::size_t const expected = tuple_count(size_, op.table.arity);
    if (op.table.entries.size() != expected) {
      throw InvariantError("operation '" + op.name + "': table has "
                           + std::to_string(op.table.entries.size()) + " entries, expected "
                           + std::to_string(expected));
    }
    for (std::size_t i = 0; i < expected; ++i) {
      if (op.table.entries[i] >= size_) {
        throw InvariantError("operation '" + op.name + "' at "
                             + tuple_text(size_, op.table.arity, i) + ": value "
                             + std::to_string(op.table.entries[i]) + " out of range");
      }
    }
    tables_.push_back(std::move(op.table));
  }
}

std::string FiniteAlgebra::display_name(ElementId e) const { return display(names_, e); }

std::size_t FiniteAlgebra::op_index(std::string_view name) const {
  return find_op(signature_, name);
}

MultiAlgebra::MultiAlgebra(std::size_t size,
                           std::vector<NamedTable<MultiOperationTable>> operations,
                           std::vector<std::string> names)
    : size_(size), names_(std::move(names)) {
  check_names(size_, names_);
  signature_ = signature_of(operations);
  tables_.reserve(operations.size());
  for (auto& op : operations) {
    std::size_t const expected = tuple_count(size_, op.table.arity);
    if (op.table.entries.size() != expected) {
      throw InvariantError("operation '" + op.name + "': table has "
                           + std::to_string(op.table.entries.size()) + " entries, expected "
                           + std::to_string(expected));
    }
    for (std::size_t i = 0; i < expected; ++i) {
      auto const& value = op.table.entries[i];
      if (value.universe_size() != size_) {
        throw InvariantError("operation '" + op.name + "' at "
                             + tuple_text(size_, op.table.arity, i)
                             + ": value set over the wrong universe");
      }
      if (value.empty()) {
        throw InvariantError("empty multi-operation value: operation '" + op.name + "' at "
                             + tuple_text(size_, op.table.arity, i));
      }
    }
    tables_.push_back(std::move(op.table));
  }
}

std::string MultiAlgebra::display_name(ElementId e) const { return display(names_, e); }

std::size_t MultiAlgebra::op_index(std::string_view name) const {
  return find_op(signature_, name);
}

ElementSet evaluate(FiniteAlgebra const& alg, std::string_view op, std::span<ElementId const> args) {
  std::size_t const i = alg.op_index(op);
  check_args(alg.signature(), i, alg.size(), args);
  return ElementSet::singleton(alg.size(), alg.apply(i, args));
}

ElementSet evaluate(MultiAlgebra const& alg, std::string_view op, std::span<ElementId const> args) {
  std::size_t const i = alg.op_index(op);
  check_args(alg.signature(), i, alg.size(), args);
  return alg.apply(i, args);
}

MultiAlgebra as_multialgebra(FiniteAlgebra const& alg) {
  std::vector<NamedTable<MultiOperationTable>> ops;
  for (std::size_t i = 0; i < alg.signature().size(); ++i) {
    MultiOperationTable t{alg.table(i).arity, {}};
    t.entries.reserve(alg.table(i).entries.size());
    for (ElementId v : alg.table(i).entries) {
      t.entries.push_back(ElementSet::singleton(alg.size(), v));
    }
    ops.push_back({alg.signature()[i].name, std::move(t)});
  }
  return MultiAlgebra(alg.size(), std::move(ops), alg.names());
}

}  // namespace tolquot
