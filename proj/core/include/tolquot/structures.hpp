#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tolquot/element_set.hpp"

namespace tolquot {

struct OperationSymbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(OperationSymbol const&, OperationSymbol const&) = default;
};

// Operation symbols sorted by name. Names are distinct, nonempty and
// whitespace-free.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OperationSymbol> symbols);

  std::span<OperationSymbol const> symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  OperationSymbol const& operator[](std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> find(std::string_view name) const noexcept;
  std::size_t max_arity() const noexcept;

  friend bool operator==(Signature const&, Signature const&) = default;

 private:
  std::vector<OperationSymbol> symbols_;
};

// Row-major tuple encoding: (t1, ..., tk) over an n-element universe has
// index sum t_i * n^(k-i). Index order is lexicographic tuple order.
std::size_t tuple_count(std::size_t universe_size, std::size_t arity);
std::size_t encode_tuple(std::size_t universe_size, std::span<ElementId const> tuple);
void decode_tuple(std::size_t universe_size, std::size_t index, std::span<ElementId> out);
std::vector<ElementId> decode_tuple(std::size_t universe_size, std::size_t arity,
                                    std::size_t index);

// Advances `tuple` to its lexicographic successor over {0..n-1}; returns
// false (and wraps to all zeros) after the last tuple.
bool next_tuple(std::span<ElementId> tuple, std::size_t universe_size) noexcept;

struct OperationTable {
  std::size_t arity = 0;
  std::vector<ElementId> entries;

  friend bool operator==(OperationTable const&, OperationTable const&) = default;
};

struct MultiOperationTable {
  std::size_t arity = 0;
  std::vector<ElementSet> entries;

  friend bool operator==(MultiOperationTable const&, MultiOperationTable const&) = default;
};

template <typename Table>
struct NamedTable {
  std::string name;
  Table table;
};

// An algebra (A; F) on {0..size-1}: every operation total and single-valued.
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::size_t size, std::vector<NamedTable<OperationTable>> operations,
                std::vector<std::string> names = {});

  std::size_t size() const noexcept { return size_; }
  Signature const& signature() const noexcept { return signature_; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string display_name(ElementId e) const;

  // Tables are indexed like signature().
  OperationTable const& table(std::size_t op) const { return tables_[op]; }
  std::size_t op_index(std::string_view name) const;

  ElementId apply(std::size_t op, std::span<ElementId const> args) const {
    return tables_[op].entries[encode_tuple(size_, args)];
  }

  friend bool operator==(FiniteAlgebra const&, FiniteAlgebra const&) = default;

 private:
  std::size_t size_;
  Signature signature_;
  std::vector<OperationTable> tables_;
  std::vector<std::string> names_;
};

// A multi-algebra (M; F): every operation maps tuples to nonempty subsets.
class MultiAlgebra {
 public:
  MultiAlgebra(std::size_t size, std::vector<NamedTable<MultiOperationTable>> operations,
               std::vector<std::string> names = {});

  std::size_t size() const noexcept { return size_; }
  Signature const& signature() const noexcept { return signature_; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string display_name(ElementId e) const;

  MultiOperationTable const& table(std::size_t op) const { return tables_[op]; }
  std::size_t op_index(std::string_view name) const;

  ElementSet const& apply(std::size_t op, std::span<ElementId const> args) const {
    return tables_[op].entries[encode_tuple(size_, args)];
  }

  // Same universe, signature and tables; display names are ignored.
  bool same_tables(MultiAlgebra const& other) const noexcept {
    return size_ == other.size_ && signature_ == other.signature_ && tables_ == other.tables_;
  }

  friend bool operator==(MultiAlgebra const&, MultiAlgebra const&) = default;

 private:
  std::size_t size_;
  Signature signature_;
  std::vector<MultiOperationTable> tables_;
  std::vector<std::string> names_;
};

// Value of `op` at `args`: a singleton for algebras, the stored set for
// multi-algebras. Throws ArgumentError on unknown name, arity mismatch or
// out-of-range argument.
ElementSet evaluate(FiniteAlgebra const& alg, std::string_view op, std::span<ElementId const> args);
ElementSet evaluate(MultiAlgebra const& alg, std::string_view op, std::span<ElementId const> args);

// Reads an algebra as the multi-algebra whose values are singletons.
MultiAlgebra as_multialgebra(FiniteAlgebra const& alg);

}  // namespace tolquot
