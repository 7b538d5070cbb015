#include "tolquot/relations.hpp"

#include <algorithm>

#include "tolquot/powerset.hpp"

namespace tolquot {

namespace {

std::string tuple_text(std::span<ElementId const> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + std::to_string(t[i]);
  }
  return out + ")";
}

std::string display(std::vector<std::string> const& names, ElementId e) {
  return names.empty() ? std::to_string(e) : names[e];
}

void check_names(std::size_t size, std::vector<std::string> const& names) {
  if (!names.empty() && names.size() != size) {
    throw InvariantError("expected " + std::to_string(size) + " names, got "
                         + std::to_string(names.size()));
  }
}

// Calls f(rhs) for every tuple rhs with (lhs[i], rhs[i]) in rel for all i,
// in lexicographic order. Stops early when f returns false.
template <typename F>
bool for_each_related_tuple(BinaryRelation const& rel, std::span<ElementId const> lhs,
                            std::vector<ElementId>& rhs, F&& f) {
  std::size_t const k = lhs.size();
  std::vector<std::vector<ElementId>> choices(k);
  for (std::size_t i = 0; i < k; ++i) {
    choices[i] = rel.row(lhs[i]).members();
  }
  std::vector<std::size_t> pos(k, 0);
  rhs.resize(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) {
      rhs[i] = choices[i][pos[i]];
    }
    if (!f(std::span<ElementId const>(rhs))) {
      return false;
    }
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++pos[i] < choices[i].size()) {
        break;
      }
      pos[i] = 0;
      if (i == 0) {
        return true;
      }
    }
    if (k == 0) {
      return true;
    }
  }
}

void bron_kerbosch(std::vector<ElementSet> const& neighbours,
                   ElementSet& r, ElementSet p, ElementSet x, std::vector<ElementSet>& out) {
  if (p.empty()) {
    if (x.empty()) {
      out.push_back(r);
    }
    return;
  }
  // Pivot: vertex of P ∪ X with the most neighbours in P, lowest index first.
  ElementSet const px = p | x;
  ElementId pivot = *px.first();
  std::size_t best = 0;
  bool have = false;
  px.for_each([&](ElementId u) {
    std::size_t const c = (p & neighbours[u]).count();
    if (!have || c > best) {
      pivot = u;
      best = c;
      have = true;
    }
  });
  ElementSet const candidates = p - neighbours[pivot];
  candidates.for_each([&](ElementId v) {
    r.set(v);
    bron_kerbosch(neighbours, r, p & neighbours[v], x & neighbours[v], out);
    r.reset(v);
    p.reset(v);
    x.set(v);
  });
}

}  // namespace

BinaryRelation::BinaryRelation(std::vector<ElementSet> rows, std::vector<std::string> names)
    : rows_(std::move(rows)), names_(std::move(names)) {
  std::size_t const n = rows_.size();
  if (n == 0) {
    throw InvariantError("relation universe must be nonempty");
  }
  check_names(n, names_);
  for (std::size_t a = 0; a < n; ++a) {
    if (rows_[a].universe_size() != n) {
      throw InvariantError("relation row " + std::to_string(a) + " has the wrong size");
    }
    if (!rows_[a].test(static_cast<ElementId>(a))) {
      throw InvariantError("relation is not reflexive: missing (" + std::to_string(a) + ","
                           + std::to_string(a) + ")");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    bool ok = true;
    ElementId missing = 0;
    rows_[a].for_each([&](ElementId b) {
      if (ok && !rows_[b].test(static_cast<ElementId>(a))) {
        ok = false;
        missing = b;
      }
    });
    if (!ok) {
      throw InvariantError("relation is not symmetric: (" + std::to_string(a) + ","
                           + std::to_string(missing) + ") present but ("
                           + std::to_string(missing) + "," + std::to_string(a) + ") missing");
    }
  }
}

BinaryRelation BinaryRelation::diagonal(std::size_t n) {
  std::vector<ElementSet> rows;
  rows.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    rows.push_back(ElementSet::singleton(n, static_cast<ElementId>(a)));
  }
  return BinaryRelation(std::move(rows));
}

BinaryRelation BinaryRelation::full(std::size_t n) {
  return BinaryRelation(std::vector<ElementSet>(n, ElementSet::full(n)));
}

BinaryRelation BinaryRelation::from_pairs(std::size_t n, std::span<ElementPair const> pairs,
                                          Closure closure, std::vector<std::string> names) {
  std::vector<ElementSet> rows(n, ElementSet(n));
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw InvariantError("pair (" + std::to_string(a) + "," + std::to_string(b)
                           + ") outside universe of size " + std::to_string(n));
    }
    rows[a].set(b);
    if (closure == Closure::close) {
      rows[b].set(a);
    }
  }
  if (closure == Closure::close) {
    for (std::size_t a = 0; a < n; ++a) {
      rows[a].set(static_cast<ElementId>(a));
    }
  }
  return BinaryRelation(std::move(rows), std::move(names));
}

std::string BinaryRelation::display_name(ElementId e) const { return display(names_, e); }

std::vector<ElementPair> BinaryRelation::pairs() const {
  std::vector<ElementPair> out;
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    rows_[a].for_each([&](ElementId b) { out.emplace_back(static_cast<ElementId>(a), b); });
  }
  return out;
}

bool BinaryRelation::is_transitive() const {
  for (std::size_t a = 0; a < rows_.size(); ++a) {
    bool ok = true;
    rows_[a].for_each([&](ElementId b) { ok = ok && rows_[b].is_subset_of(rows_[a]); });
    if (!ok) {
      return false;
    }
  }
  return true;
}

std::optional<std::string> covering_defect(std::size_t universe_size,
                                           std::span<ElementSet const> blocks) {
  if (universe_size == 0) {
    return "universe must be nonempty";
  }
  ElementSet covered(universe_size);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].universe_size() != universe_size) {
      return "block " + std::to_string(i) + " is over the wrong universe";
    }
    if (blocks[i].empty()) {
      return "block " + std::to_string(i) + " is empty";
    }
    covered |= blocks[i];
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i != j && blocks[i].is_subset_of(blocks[j])) {
        return "block " + to_string(blocks[i]) + " is contained in block "
               + to_string(blocks[j]);
      }
    }
  }
  if (auto missing = (ElementSet::full(universe_size) - covered).first()) {
    return "element " + std::to_string(*missing) + " is in no block";
  }
  return std::nullopt;
}

Covering::Covering(std::size_t universe_size, std::vector<ElementSet> blocks,
                   std::vector<std::string> names)
    : size_(universe_size), blocks_(std::move(blocks)), names_(std::move(names)) {
  check_names(size_, names_);
  if (auto defect = covering_defect(size_, blocks_)) {
    throw InvariantError("not a covering: " + *defect);
  }
  std::sort(blocks_.begin(), blocks_.end());
}

std::string Covering::display_name(ElementId e) const { return display(names_, e); }

std::optional<std::size_t> Covering::index_of(ElementSet const& block) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), block);
  if (it == blocks_.end() || *it != block) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - blocks_.begin());
}

ElementSet Covering::blocks_containing(ElementId e) const {
  ElementSet out(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].test(e)) {
      out.set(static_cast<ElementId>(i));
    }
  }
  return out;
}

std::string describe(SubstitutionViolation const& v) {
  return "operation '" + v.op + "' at " + tuple_text(v.lhs) + " and " + tuple_text(v.rhs)
         + ": images " + std::to_string(v.lhs_image) + " and " + std::to_string(v.rhs_image)
         + " are not related";
}

std::optional<SubstitutionViolation> find_substitution_violation(FiniteAlgebra const& alg,
                                                                 BinaryRelation const& rel) {
  if (alg.size() != rel.size()) {
    throw ArgumentError("relation size " + std::to_string(rel.size())
                        + " does not match algebra size " + std::to_string(alg.size()));
  }
  std::size_t const n = alg.size();
  std::vector<ElementId> rhs;
  std::vector<ElementId> candidate;
  for (std::size_t op = 0; op < alg.signature().size(); ++op) {
    std::size_t const arity = alg.signature()[op].arity;
    auto const& entries = alg.table(op).entries;

    // preimages[v]: indices of tuples with image v, ascending.
    std::vector<std::vector<std::size_t>> preimages(n);
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      preimages[entries[idx]].push_back(idx);
    }

    std::vector<ElementId> lhs(arity, 0);
    candidate.resize(arity);
    do {
      ElementId const image = alg.apply(op, lhs);
      ElementSet const outside = ElementSet::full(n) - rel.row(image);
      if (outside.empty()) {
        continue;
      }
      // Either scan the tuples whose image falls outside row(image), or walk
      // all tuples related to lhs; whichever is smaller.
      std::size_t scan_cost = 0;
      outside.for_each([&](ElementId v) { scan_cost += preimages[v].size(); });
      double related_cost = 1.0;
      for (ElementId a : lhs) {
        related_cost *= static_cast<double>(rel.row(a).count());
      }

      std::optional<std::size_t> worst;
      if (static_cast<double>(scan_cost) <= related_cost) {
        outside.for_each([&](ElementId v) {
          for (std::size_t idx : preimages[v]) {
            if (worst && idx >= *worst) {
              break;
            }
            decode_tuple(n, idx, candidate);
            bool related = true;
            for (std::size_t i = 0; i < arity && related; ++i) {
              related = rel.related(lhs[i], candidate[i]);
            }
            if (related) {
              worst = idx;
              break;
            }
          }
        });
      } else {
        for_each_related_tuple(rel, lhs, rhs, [&](std::span<ElementId const> b) {
          if (!rel.related(image, alg.apply(op, b))) {
            worst = encode_tuple(n, b);
            return false;
          }
          return true;
        });
      }
      if (worst) {
        auto b = decode_tuple(n, arity, *worst);
        ElementId const other = alg.apply(op, b);
        return SubstitutionViolation{alg.signature()[op].name, lhs, std::move(b), image, other};
      }
    } while (next_tuple(lhs, n));
  }
  return std::nullopt;
}

void require_tolerance(FiniteAlgebra const& alg, BinaryRelation const& rel) {
  if (auto v = find_substitution_violation(alg, rel)) {
    throw NotATolerance(std::move(*v));
  }
}

BinaryRelation tolerance_generated_by(FiniteAlgebra const& alg,
                                      std::span<ElementPair const> pairs) {
  std::size_t const n = alg.size();
  std::vector<ElementSet> rows(n, ElementSet(n));
  for (std::size_t a = 0; a < n; ++a) {
    rows[a].set(static_cast<ElementId>(a));
  }
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw ArgumentError("pair (" + std::to_string(a) + "," + std::to_string(b)
                          + ") outside universe of size " + std::to_string(n));
    }
    rows[a].set(b);
    rows[b].set(a);
  }
  std::vector<ElementId> rhs;
  bool changed = true;
  while (changed) {
    changed = false;
    BinaryRelation const current(rows);
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      std::vector<ElementId> lhs(alg.signature()[op].arity, 0);
      do {
        ElementId const image = alg.apply(op, lhs);
        for_each_related_tuple(current, lhs, rhs, [&](std::span<ElementId const> b) {
          ElementId const other = alg.apply(op, b);
          if (!rows[image].test(other)) {
            rows[image].set(other);
            rows[other].set(image);
            changed = true;
          }
          return true;
        });
      } while (next_tuple(lhs, n));
    }
  }
  return BinaryRelation(std::move(rows), alg.names());
}

bool is_clique(BinaryRelation const& rel, ElementSet const& s) {
  bool ok = true;
  s.for_each([&](ElementId a) { ok = ok && s.is_subset_of(rel.row(a)); });
  return ok;
}

bool is_maximal_clique(BinaryRelation const& rel, ElementSet const& s) {
  if (s.empty() || !is_clique(rel, s)) {
    return false;
  }
  ElementSet common = ElementSet::full(rel.size());
  s.for_each([&](ElementId a) { common &= rel.row(a); });
  return (common - s).empty();
}

Covering maximal_cliques(BinaryRelation const& rel) {
  std::size_t const n = rel.size();
  std::vector<ElementSet> neighbours;
  neighbours.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    ElementSet row = rel.row(static_cast<ElementId>(a));
    row.reset(static_cast<ElementId>(a));
    neighbours.push_back(std::move(row));
  }
  std::vector<ElementSet> out;
  ElementSet r(n);
  bron_kerbosch(neighbours, r, ElementSet::full(n), ElementSet(n), out);
  return Covering(n, std::move(out), rel.names());
}

BinaryRelation induced_relation(Covering const& cov) {
  std::size_t const n = cov.universe_size();
  std::vector<ElementSet> rows(n, ElementSet(n));
  for (auto const& block : cov.blocks()) {
    block.for_each([&](ElementId a) { rows[a] |= block; });
  }
  return BinaryRelation(std::move(rows), cov.names());
}

char const* kind_name(FullCoveringViolation::Kind kind) {
  using K = FullCoveringViolation::Kind;
  switch (kind) {
    case K::empty_block: return "empty_block";
    case K::not_a_clique: return "not_a_clique";
    case K::not_maximal: return "not_maximal";
    case K::comparable_blocks: return "comparable_blocks";
    case K::uncovered_element: return "uncovered_element";
    case K::missing_pair: return "missing_pair";
  }
  return "unknown";
}

std::string describe(FullCoveringViolation const& v) {
  using K = FullCoveringViolation::Kind;
  auto const blk = "block " + std::to_string(v.block);
  switch (v.kind) {
    case K::empty_block: return blk + " is empty";
    case K::not_a_clique:
      return blk + " is not a clique: " + std::to_string(v.a) + " and " + std::to_string(v.b)
             + " are unrelated";
    case K::not_maximal:
      return blk + " is not a maximal clique: element " + std::to_string(v.a)
             + " is related to all of it";
    case K::comparable_blocks:
      return blk + " is contained in block " + std::to_string(v.other);
    case K::uncovered_element:
      return "union of blocks misses element " + std::to_string(v.a);
    case K::missing_pair:
      return "pair (" + std::to_string(v.a) + "," + std::to_string(v.b)
             + ") is related but shares no block";
  }
  return "unknown violation";
}

std::optional<FullCoveringViolation> find_full_covering_violation(
    FiniteAlgebra const& alg, BinaryRelation const& rel, std::span<ElementSet const> blocks) {
  using K = FullCoveringViolation::Kind;
  require_tolerance(alg, rel);
  std::size_t const n = rel.size();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].universe_size() != n) {
      throw ArgumentError("block " + std::to_string(i) + " is over a universe of size "
                          + std::to_string(blocks[i].universe_size()) + ", expected "
                          + std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto const& block = blocks[i];
    if (block.empty()) {
      return FullCoveringViolation{K::empty_block, i};
    }
    std::optional<ElementPair> unrelated;
    block.for_each([&](ElementId a) {
      if (!unrelated) {
        if (auto b = (block - rel.row(a)).first()) {
          unrelated = ElementPair{a, *b};
        }
      }
    });
    if (unrelated) {
      return FullCoveringViolation{K::not_a_clique, i, 0, unrelated->first, unrelated->second};
    }
    ElementSet common = ElementSet::full(n);
    block.for_each([&](ElementId a) { common &= rel.row(a); });
    if (auto extra = (common - block).first()) {
      return FullCoveringViolation{K::not_maximal, i, 0, *extra};
    }
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i != j && blocks[i].is_subset_of(blocks[j])) {
        return FullCoveringViolation{K::comparable_blocks, i, j};
      }
    }
  }
  ElementSet covered(n);
  for (auto const& block : blocks) {
    covered |= block;
  }
  if (auto missing = (ElementSet::full(n) - covered).first()) {
    return FullCoveringViolation{K::uncovered_element, 0, 0, *missing};
  }
  for (std::size_t a = 0; a < n; ++a) {
    ElementSet shared(n);
    for (auto const& block : blocks) {
      if (block.test(static_cast<ElementId>(a))) {
        shared |= block;
      }
    }
    if (auto b = (rel.row(static_cast<ElementId>(a)) - shared).first()) {
      return FullCoveringViolation{K::missing_pair, 0, 0, static_cast<ElementId>(a), *b};
    }
  }
  return std::nullopt;
}

std::optional<FullCoveringViolation> find_full_covering_violation(FiniteAlgebra const& alg,
                                                                  BinaryRelation const& rel,
                                                                  Covering const& cov) {
  return find_full_covering_violation(alg, rel, std::span<ElementSet const>(cov.blocks()));
}

BinaryRelation nondisjointness(unsigned m, unsigned limit) {
  if (m == 0) {
    throw ArgumentError("nondisjointness needs m >= 1");
  }
  if (m > limit || m > 30) {
    throw LimitError("nondisjointness: m = " + std::to_string(m) + " exceeds the limit "
                     + std::to_string(std::min(limit, 30U)));
  }
  std::size_t const n = powerset::universe_size(m);
  std::vector<ElementSet> rows(n, ElementSet(n));
  for (std::uint64_t x = 1; x <= n; ++x) {
    for (std::uint64_t y = 1; y <= n; ++y) {
      if ((x & y) != 0) {
        rows[powerset::element_of(x)].set(powerset::element_of(y));
      }
    }
  }
  return BinaryRelation(std::move(rows), powerset::subset_labels(m));
}

namespace powerset {

std::string subset_label(std::uint64_t mask, unsigned m) {
  std::string out;
  bool const compact = m <= 9;
  for (unsigned k = 0; k < m; ++k) {
    if ((mask >> k) & 1U) {
      if (!compact && !out.empty()) {
        out += ',';
      }
      out += std::to_string(k + 1);
    }
  }
  return compact ? out : "{" + out + "}";
}

std::vector<std::string> subset_labels(unsigned m) {
  std::vector<std::string> out;
  out.reserve(universe_size(m));
  for (std::uint64_t mask = 1; mask <= top_mask(m); ++mask) {
    out.push_back(subset_label(mask, m));
  }
  return out;
}

}  // namespace powerset

}  // namespace tolquot
