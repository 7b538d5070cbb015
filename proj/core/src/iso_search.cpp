#include "tolquot/iso_search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <numeric>

namespace tolquot {

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

namespace {

void require_same_signature(MultiAlgebra const& lhs, MultiAlgebra const& rhs) {
  if (lhs.signature() != rhs.signature()) {
    throw ArgumentError("multi-algebras have different signatures");
  }
}

// Per-element invariant: for each operation and argument position, the
// histogram of value-set sizes over tuples with the element at that
// position, followed by how many values contain the element.
std::vector<std::vector<std::size_t>> element_invariants(MultiAlgebra const& m) {
  std::size_t const n = m.size();
  std::vector<std::vector<std::size_t>> inv(n);
  for (std::size_t op = 0; op < m.signature().size(); ++op) {
    std::size_t const arity = m.signature()[op].arity;
    auto const& entries = m.table(op).entries;
    std::size_t const stride = n + 1;
    std::vector<std::size_t> hist(n * (arity * stride + 1), 0);
    std::vector<ElementId> t(arity);
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      decode_tuple(n, idx, t);
      std::size_t const size = entries[idx].count();
      for (std::size_t p = 0; p < arity; ++p) {
        ++hist[t[p] * (arity * stride + 1) + p * stride + size];
      }
      entries[idx].for_each([&](ElementId e) { ++hist[e * (arity * stride + 1) + arity * stride]; });
    }
    for (std::size_t e = 0; e < n; ++e) {
      auto first = hist.begin() + static_cast<std::ptrdiff_t>(e * (arity * stride + 1));
      inv[e].insert(inv[e].end(), first, first + static_cast<std::ptrdiff_t>(arity * stride + 1));
    }
  }
  return inv;
}

class IsoSearch {
 public:
  IsoSearch(MultiAlgebra const& lhs, MultiAlgebra const& rhs)
      : lhs_(lhs), rhs_(rhs), n_(lhs.size()), map_(n_, 0), inverse_(n_, unassigned),
        assigned_(n_, false) {
    auto const li = element_invariants(lhs);
    auto const ri = element_invariants(rhs);
    candidates_.resize(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        if (li[a] == ri[b]) {
          candidates_[a].push_back(static_cast<ElementId>(b));
        }
      }
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), ElementId{0});
    std::stable_sort(order_.begin(), order_.end(), [&](ElementId a, ElementId b) {
      return candidates_[a].size() < candidates_[b].size();
    });
  }

  std::optional<IsoWitness> run() {
    for (auto const& c : candidates_) {
      if (c.empty()) {
        return std::nullopt;
      }
    }
    if (extend(0)) {
      return IsoWitness{map_};
    }
    return std::nullopt;
  }

 private:
  static constexpr ElementId unassigned = ~ElementId{0};

  bool extend(std::size_t depth) {
    if (depth == n_) {
      return is_isomorphism(lhs_, rhs_, map_);
    }
    ElementId const a = order_[depth];
    for (ElementId b : candidates_[a]) {
      if (inverse_[b] != unassigned) {
        continue;
      }
      map_[a] = b;
      inverse_[b] = a;
      assigned_[a] = true;
      assigned_list_.push_back(a);
      if (consistent(a) && extend(depth + 1)) {
        return true;
      }
      assigned_list_.pop_back();
      assigned_[a] = false;
      inverse_[b] = unassigned;
    }
    return false;
  }

  // Checks every tuple over assigned elements that mentions `fresh`.
  bool consistent(ElementId fresh) const {
    std::size_t const d = assigned_list_.size();
    for (std::size_t op = 0; op < lhs_.signature().size(); ++op) {
      std::size_t const arity = lhs_.signature()[op].arity;
      if (arity == 0) {
        continue;
      }
      std::vector<std::size_t> pos(arity, 0);
      std::vector<ElementId> t(arity);
      std::vector<ElementId> image(arity);
      while (true) {
        bool mentions = false;
        for (std::size_t i = 0; i < arity; ++i) {
          t[i] = assigned_list_[pos[i]];
          image[i] = map_[t[i]];
          mentions = mentions || t[i] == fresh;
        }
        if (mentions && !value_consistent(lhs_.apply(op, t), rhs_.apply(op, image))) {
          return false;
        }
        std::size_t i = arity;
        bool more = false;
        while (i > 0) {
          --i;
          if (++pos[i] < d) {
            more = true;
            break;
          }
          pos[i] = 0;
        }
        if (!more) {
          break;
        }
      }
    }
    return true;
  }

  bool value_consistent(ElementSet const& left, ElementSet const& right) const {
    if (left.count() != right.count()) {
      return false;
    }
    bool ok = true;
    left.for_each([&](ElementId e) { ok = ok && (!assigned_[e] || right.test(map_[e])); });
    right.for_each([&](ElementId e) {
      ok = ok && (inverse_[e] == unassigned || left.test(inverse_[e]));
    });
    return ok;
  }

  MultiAlgebra const& lhs_;
  MultiAlgebra const& rhs_;
  std::size_t n_;
  std::vector<ElementId> map_;
  std::vector<ElementId> inverse_;
  std::vector<bool> assigned_;
  std::vector<ElementId> assigned_list_;
  std::vector<std::vector<ElementId>> candidates_;
  std::vector<ElementId> order_;
};

}  // namespace

bool is_isomorphism(MultiAlgebra const& lhs, MultiAlgebra const& rhs,
                    std::span<ElementId const> mapping) {
  if (lhs.signature() != rhs.signature() || lhs.size() != rhs.size()
      || mapping.size() != lhs.size()) {
    return false;
  }
  std::size_t const n = lhs.size();
  std::vector<bool> hit(n, false);
  for (ElementId e : mapping) {
    if (e >= n || hit[e]) {
      return false;
    }
    hit[e] = true;
  }
  for (std::size_t op = 0; op < lhs.signature().size(); ++op) {
    std::size_t const arity = lhs.signature()[op].arity;
    std::vector<ElementId> t(arity, 0);
    std::vector<ElementId> image(arity);
    do {
      for (std::size_t i = 0; i < arity; ++i) {
        image[i] = mapping[t[i]];
      }
      ElementSet mapped(n);
      lhs.apply(op, t).for_each([&](ElementId e) { mapped.set(mapping[e]); });
      if (mapped != rhs.apply(op, image)) {
        return false;
      }
    } while (next_tuple(t, n));
  }
  return true;
}

std::optional<IsoWitness> are_isomorphic(MultiAlgebra const& lhs, MultiAlgebra const& rhs) {
  require_same_signature(lhs, rhs);
  if (lhs.size() != rhs.size()) {
    return std::nullopt;
  }
  return IsoSearch(lhs, rhs).run();
}

// ---------------------------------------------------------------------------
// Fourth clique
// ---------------------------------------------------------------------------

ElementSet derive_fourth_clique(BinaryRelation const& rel, ElementSet const& b,
                                ElementSet const& c, ElementSet const& d, ElementId x,
                                ElementId y, ElementId z) {
  std::size_t const n = rel.size();
  struct Named {
    char const* name;
    ElementSet const* set;
  };
  for (auto [name, set] : {Named{"B", &b}, Named{"C", &c}, Named{"D", &d}}) {
    if (set->universe_size() != n) {
      throw ArgumentError(std::string(name) + " is over the wrong universe");
    }
    if (!is_maximal_clique(rel, *set)) {
      throw ArgumentError(std::string(name) + " is not a maximal clique");
    }
  }
  for (ElementId e : {x, y, z}) {
    if (e >= n) {
      throw ArgumentError("element " + std::to_string(e) + " outside universe");
    }
  }
  auto require = [](bool ok, std::string const& what) {
    if (!ok) {
      throw ArgumentError("precondition failed: " + what);
    }
  };
  require(b.test(x), "x in B");
  require(c.test(x), "x in C");
  require(!d.test(x), "x not in D");
  require(b.test(y), "y in B");
  require(d.test(y), "y in D");
  require(!c.test(y), "y not in C");
  require(c.test(z), "z in C");
  require(d.test(z), "z in D");
  require(!b.test(z), "z not in B");

  ElementSet const out = ElementSet::of(n, {x, y, z});
  if (!is_clique(rel, out) || out.is_subset_of(b) || out.is_subset_of(c) || out.is_subset_of(d)) {
    throw VerificationFailure("derived set is not a clique escaping B, C and D");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representation search
// ---------------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

constexpr std::size_t max_search_universe = 16;
constexpr std::size_t max_target_size = 8;
constexpr std::size_t relation_enumeration_limit = 6;

bool has(Mask m, std::size_t i) { return ((m >> i) & 1U) != 0; }

// Maximal cliques of a small reflexive-symmetric relation given by
// adjacency masks (diagonal included), ascending by mask value.
void small_cliques(std::vector<Mask> const& adj, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0) {
    if (x == 0) {
      out.push_back(r);
    }
    return;
  }
  Mask const px = p | x;
  std::size_t pivot = static_cast<std::size_t>(std::countr_zero(px));
  int best = -1;
  for (Mask s = px; s != 0; s &= s - 1) {
    auto const u = static_cast<std::size_t>(std::countr_zero(s));
    int const c = std::popcount(p & adj[u] & ~(Mask{1} << u));
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  Mask const nb_pivot = adj[pivot] & ~(Mask{1} << pivot);
  for (Mask s = p & ~nb_pivot; s != 0; s &= s - 1) {
    auto const v = static_cast<std::size_t>(std::countr_zero(s));
    Mask const nb = adj[v] & ~(Mask{1} << v);
    small_cliques(adj, r | (Mask{1} << v), p & nb, x & nb, out);
    p &= ~(Mask{1} << v);
    x |= Mask{1} << v;
  }
}

std::vector<Mask> all_maximal_cliques(std::vector<Mask> const& adj) {
  std::vector<Mask> out;
  Mask const all = adj.size() == 64 ? ~Mask{0} : (Mask{1} << adj.size()) - 1;
  small_cliques(adj, 0, all, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool small_is_maximal_clique(std::vector<Mask> const& adj, Mask s) {
  Mask common = ~Mask{0};
  for (Mask t = s; t != 0; t &= t - 1) {
    common &= adj[static_cast<std::size_t>(std::countr_zero(t))];
  }
  return (common & s) == s && common == s;
}

// A relation with the blocks its quotient is taken over.
struct Candidate {
  std::size_t n = 0;
  std::vector<Mask> adj;
  std::vector<Mask> blocks;  // ascending
};

struct Target {
  std::size_t k = 0;
  std::vector<std::size_t> arities;
  std::vector<std::vector<Mask>> values;  // per op, per tuple index
  bool pair_triangle_pattern = false;
};

Target prepare_target(MultiAlgebra const& target) {
  Target t;
  t.k = target.size();
  for (std::size_t op = 0; op < target.signature().size(); ++op) {
    t.arities.push_back(target.signature()[op].arity);
    std::vector<Mask> vals;
    for (auto const& v : target.table(op).entries) {
      vals.push_back(v.low_word());
    }
    t.values.push_back(std::move(vals));
  }
  // Three elements whose pairwise values under one binary operation are
  // exactly the pair itself (the shape of a + b = {a, b}).
  for (std::size_t op = 0; op < t.arities.size() && !t.pair_triangle_pattern; ++op) {
    if (t.arities[op] != 2) {
      continue;
    }
    auto pair_value = [&](std::size_t u, std::size_t v) {
      Mask const want = (Mask{1} << u) | (Mask{1} << v);
      return t.values[op][u * t.k + v] == want || t.values[op][v * t.k + u] == want;
    };
    for (std::size_t p = 0; p < t.k && !t.pair_triangle_pattern; ++p) {
      for (std::size_t q = p + 1; q < t.k && !t.pair_triangle_pattern; ++q) {
        for (std::size_t r = q + 1; r < t.k && !t.pair_triangle_pattern; ++r) {
          t.pair_triangle_pattern = pair_value(p, q) && pair_value(p, r) && pair_value(q, r);
        }
      }
    }
  }
  return t;
}

// Backtracking over one operation table with forward checking of the
// Substitution Property and of the value upper bounds; lower bounds are
// checked once every representative of a block tuple is assigned.
class TableSearch {
 public:
  TableSearch(Candidate const& cand, std::size_t arity, std::vector<Mask> required,
              SearchStats& stats, std::uint64_t node_budget)
      : cand_(cand), arity_(arity), required_(std::move(required)), stats_(stats),
        node_budget_(node_budget) {}

  // nullopt: infeasible, or budget_hit() when the node budget ran out.
  std::optional<std::vector<ElementId>> solve() {
    std::size_t const n = cand_.n;
    std::size_t const k = cand_.blocks.size();
    tuples_ = tuple_count(n, arity_);
    std::size_t const block_tuples = tuple_count(k, arity_);

    std::vector<Mask> containing(n, 0);  // blocks containing each element
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t e = 0; e < n; ++e) {
        if (has(cand_.blocks[b], e)) {
          containing[e] |= Mask{1} << b;
        }
      }
    }

    std::vector<Mask> value_meet(block_tuples);  // intersection of required blocks
    for (std::size_t bt = 0; bt < block_tuples; ++bt) {
      Mask meet = (n == 64) ? ~Mask{0} : (Mask{1} << n) - 1;
      for (Mask v = required_[bt]; v != 0; v &= v - 1) {
        meet &= cand_.blocks[static_cast<std::size_t>(std::countr_zero(v))];
      }
      if (meet == 0) {
        ++stats_.region_prunes;
        return std::nullopt;
      }
      value_meet[bt] = meet;
    }

    // Domains and block-tuple membership of each tuple.
    domain_.assign(tuples_, 0);
    reps_.assign(block_tuples, {});
    std::vector<ElementId> t(arity_);
    for (std::size_t idx = 0; idx < tuples_; ++idx) {
      decode_tuple(n, idx, t);
      Mask dom = (n == 64) ? ~Mask{0} : (Mask{1} << n) - 1;
      for_each_block_tuple(containing, t, [&](std::size_t bt) {
        dom &= value_meet[bt];
        reps_[bt].push_back(idx);
      });
      if (dom == 0) {
        ++stats_.region_prunes;
        return std::nullopt;
      }
      domain_[idx] = dom;
    }

    // Each excluded block must be escaped by some representative's domain.
    for (std::size_t bt = 0; bt < block_tuples; ++bt) {
      Mask reach = 0;
      for (std::size_t idx : reps_[bt]) {
        reach |= domain_[idx];
      }
      for (std::size_t b = 0; b < k; ++b) {
        if (!has(required_[bt], b) && (reach & ~cand_.blocks[b]) == 0) {
          ++stats_.region_prunes;
          return std::nullopt;
        }
      }
    }

    completes_.assign(tuples_, {});
    for (std::size_t bt = 0; bt < block_tuples; ++bt) {
      completes_[reps_[bt].back()].push_back(bt);
    }

    later_related_.assign(tuples_, {});
    std::vector<ElementId> u(arity_);
    for (std::size_t a = 0; a < tuples_; ++a) {
      decode_tuple(n, a, t);
      for (std::size_t b = a + 1; b < tuples_; ++b) {
        decode_tuple(n, b, u);
        bool related = true;
        for (std::size_t i = 0; i < arity_ && related; ++i) {
          related = has(cand_.adj[t[i]], u[i]);
        }
        if (related) {
          later_related_[a].push_back(b);
        }
      }
    }

    values_.assign(tuples_, 0);
    if (assign(0, domain_)) {
      return values_;
    }
    return std::nullopt;
  }

  bool budget_hit() const noexcept { return budget_hit_; }

 private:
  template <typename F>
  void for_each_block_tuple(std::vector<Mask> const& containing, std::vector<ElementId> const& t,
                            F&& f) const {
    std::size_t const k = cand_.blocks.size();
    if (arity_ == 0) {
      f(0);
      return;
    }
    // Depth-first over the blocks containing each coordinate; prefix[i] is
    // the row-major index of the first i chosen blocks.
    std::vector<Mask> rest(arity_);
    std::vector<std::size_t> prefix(arity_ + 1, 0);
    std::size_t i = 0;
    rest[0] = containing[t[0]];
    while (true) {
      if (rest[i] == 0) {
        if (i == 0) {
          return;
        }
        --i;
        continue;
      }
      auto const digit = static_cast<std::size_t>(std::countr_zero(rest[i]));
      rest[i] &= rest[i] - 1;
      prefix[i + 1] = prefix[i] * k + digit;
      if (i + 1 == arity_) {
        f(prefix[arity_]);
      } else {
        ++i;
        rest[i] = containing[t[i]];
      }
    }
  }

  bool assign(std::size_t idx, std::vector<Mask> const& domains) {
    if (idx == tuples_) {
      return true;
    }
    for (Mask choices = domains[idx]; choices != 0; choices &= choices - 1) {
      if (++stats_.table_nodes > node_budget_) {
        budget_hit_ = true;
        return false;
      }
      auto const v = static_cast<ElementId>(std::countr_zero(choices));
      values_[idx] = v;
      if (!lower_bounds_hold(idx)) {
        continue;
      }
      std::vector<Mask> next = domains;
      bool ok = true;
      for (std::size_t later : later_related_[idx]) {
        next[later] &= cand_.adj[v];
        if (next[later] == 0) {
          ok = false;
          break;
        }
      }
      if (ok && assign(idx + 1, next)) {
        return true;
      }
      if (budget_hit_) {
        return false;
      }
    }
    return false;
  }

  bool lower_bounds_hold(std::size_t idx) const {
    for (std::size_t bt : completes_[idx]) {
      Mask images = 0;
      for (std::size_t r : reps_[bt]) {
        images |= Mask{1} << values_[r];
      }
      for (std::size_t b = 0; b < cand_.blocks.size(); ++b) {
        if (!has(required_[bt], b) && (images & ~cand_.blocks[b]) == 0) {
          return false;
        }
      }
    }
    return true;
  }

  Candidate const& cand_;
  std::size_t arity_;
  std::vector<Mask> required_;
  SearchStats& stats_;
  std::uint64_t node_budget_;
  bool budget_hit_ = false;
  std::size_t tuples_ = 0;
  std::vector<Mask> domain_;
  std::vector<std::vector<std::size_t>> reps_;
  std::vector<std::vector<std::size_t>> completes_;
  std::vector<std::vector<std::size_t>> later_related_;
  std::vector<ElementId> values_;
};

struct CandidateResult {
  std::optional<RepresentationWitness> witness;
  SearchStats stats;
  bool budget_hit = false;
};

CandidateResult search_candidate(Candidate const& cand, Target const& target,
                                 Signature const& sig, std::uint64_t node_budget) {
  CandidateResult res;
  std::size_t const k = target.k;
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    ++res.stats.bijections_examined;
    // perm[b] = target element for block b.
    std::vector<std::size_t> inverse(k);
    for (std::size_t b = 0; b < k; ++b) {
      inverse[perm[b]] = b;
    }
    std::vector<NamedTable<OperationTable>> tables;
    bool feasible = true;
    for (std::size_t op = 0; op < target.arities.size() && feasible; ++op) {
      std::size_t const arity = target.arities[op];
      std::size_t const block_tuples = tuple_count(k, arity);
      std::vector<Mask> required(block_tuples);
      std::vector<ElementId> bt(arity);
      std::vector<ElementId> image(arity);
      for (std::size_t idx = 0; idx < block_tuples; ++idx) {
        decode_tuple(k, idx, bt);
        for (std::size_t i = 0; i < arity; ++i) {
          image[i] = static_cast<ElementId>(perm[bt[i]]);
        }
        Mask const value = target.values[op][encode_tuple(k, image)];
        Mask req = 0;
        for (Mask v = value; v != 0; v &= v - 1) {
          req |= Mask{1} << inverse[static_cast<std::size_t>(std::countr_zero(v))];
        }
        required[idx] = req;
      }
      TableSearch search(cand, arity, std::move(required), res.stats, node_budget);
      auto solution = search.solve();
      if (search.budget_hit()) {
        res.budget_hit = true;
        return res;
      }
      if (!solution) {
        feasible = false;
        break;
      }
      tables.push_back({sig[op].name, OperationTable{arity, std::move(*solution)}});
    }
    if (feasible) {
      std::size_t const n = cand.n;
      std::vector<ElementSet> rows;
      for (std::size_t e = 0; e < n; ++e) {
        rows.push_back(ElementSet::from_mask(n, cand.adj[e]));
      }
      std::vector<ElementSet> blocks;
      for (Mask b : cand.blocks) {
        blocks.push_back(ElementSet::from_mask(n, b));
      }
      IsoWitness iso;
      for (std::size_t b = 0; b < k; ++b) {
        iso.mapping.push_back(static_cast<ElementId>(perm[b]));
      }
      res.witness = RepresentationWitness{FiniteAlgebra(n, std::move(tables)),
                                          BinaryRelation(std::move(rows)),
                                          Covering(n, std::move(blocks)), std::move(iso)};
      return res;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return res;
}

// -- candidate enumeration ---------------------------------------------------

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Accepts the candidate's relation/covering structure for the search kind.
// Returns the quotient blocks, or nullopt to skip.
std::vector<std::vector<Mask>> quotient_block_sets(std::vector<Mask> const& adj,
                                                   std::size_t k, SearchKind kind) {
  auto const cliques = all_maximal_cliques(adj);
  if (kind == SearchKind::tolerance) {
    if (cliques.size() == k) {
      return {cliques};
    }
    return {};
  }
  // Full coverings: k-subsets of the maximal cliques inducing adj.
  std::vector<std::vector<Mask>> out;
  if (cliques.size() < k) {
    return out;
  }
  std::size_t const n = adj.size();
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    std::vector<Mask> induced(n, 0);
    std::vector<Mask> chosen;
    for (std::size_t i : pick) {
      chosen.push_back(cliques[i]);
      for (Mask s = cliques[i]; s != 0; s &= s - 1) {
        induced[static_cast<std::size_t>(std::countr_zero(s))] |= cliques[i];
      }
    }
    if (induced == adj) {
      out.push_back(std::move(chosen));
    }
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == cliques.size() - k + (i - 1)) {
      --i;
    }
    if (i == 0) {
      break;
    }
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) {
      pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

// Graphs on n vertices up to isomorphism (lexicographically least edge code).
std::vector<std::vector<Mask>> canonical_relations(std::size_t n, SearchStats& stats) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  auto const perms = all_permutations(n);
  std::size_t const m = pairs.size();
  std::vector<std::vector<Mask>> out;
  std::vector<Mask> adj(n);
  for (Mask code = 0; code < (Mask{1} << m); ++code) {
    ++stats.relations_examined;
    // Pair e carries weight 2^(m-1-e) so that lexicographic order on the
    // pair sequence is numeric order on the code.
    auto edge = [&](std::size_t e) { return has(code, m - 1 - e); };
    for (std::size_t i = 0; i < n; ++i) {
      adj[i] = Mask{1} << i;
    }
    for (std::size_t e = 0; e < m; ++e) {
      if (edge(e)) {
        adj[pairs[e].first] |= Mask{1} << pairs[e].second;
        adj[pairs[e].second] |= Mask{1} << pairs[e].first;
      }
    }
    bool canonical = true;
    for (auto const& p : perms) {
      for (std::size_t e = 0; e < m; ++e) {
        bool const mine = edge(e);
        bool const theirs = has(adj[p[pairs[e].first]], p[pairs[e].second]);
        if (mine != theirs) {
          canonical = !mine;  // a 1 where the permuted code has 0 is larger
          break;
        }
      }
      if (!canonical) {
        break;
      }
    }
    if (canonical) {
      out.push_back(adj);
    }
  }
  return out;
}

// Coverings by k blocks on n elements up to element and block relabelling:
// each element is described by the nonempty set of blocks containing it.
struct TypeCovering {
  std::vector<Mask> types;  // nondecreasing
};

std::vector<TypeCovering> canonical_type_coverings(std::size_t n, std::size_t k,
                                                   SearchStats& stats) {
  std::size_t const type_count = (std::size_t{1} << k) - 1;
  auto const block_perms = k <= 6 ? all_permutations(k) : std::vector<std::vector<std::size_t>>{};
  std::vector<TypeCovering> out;
  std::vector<Mask> types(n, 1);
  auto permute = [&](Mask t, std::vector<std::size_t> const& p) {
    Mask r = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (has(t, b)) {
        r |= Mask{1} << p[b];
      }
    }
    return r;
  };
  std::vector<Mask> image(n);
  while (true) {
    ++stats.relations_examined;
    bool ok = true;
    // Blocks nonempty and pairwise incomparable.
    std::vector<Mask> blocks(k, 0);
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t b = 0; b < k; ++b) {
        if (has(types[e], b)) {
          blocks[b] |= Mask{1} << e;
        }
      }
    }
    for (std::size_t b = 0; b < k && ok; ++b) {
      ok = blocks[b] != 0;
      for (std::size_t c = 0; c < k && ok; ++c) {
        ok = b == c || (blocks[b] & ~blocks[c]) != 0;
      }
    }
    for (std::size_t pi = 1; pi < block_perms.size() && ok; ++pi) {
      for (std::size_t e = 0; e < n; ++e) {
        image[e] = permute(types[e], block_perms[pi]);
      }
      std::sort(image.begin(), image.end());
      ok = !std::lexicographical_compare(image.begin(), image.end(), types.begin(), types.end());
    }
    if (ok) {
      out.push_back({types});
    }
    // Next nondecreasing sequence over 1..type_count.
    std::size_t i = n;
    while (i > 0 && types[i - 1] == type_count) {
      --i;
    }
    if (i == 0) {
      break;
    }
    Mask const v = types[i - 1] + 1;
    for (std::size_t j = i - 1; j < n; ++j) {
      types[j] = v;
    }
  }
  return out;
}

double binomial(double n, double r) {
  return std::exp(std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1));
}

std::vector<Candidate> candidates_for_size(std::size_t n, Target const& target, SearchKind kind,
                                           SearchStats& stats) {
  std::size_t const k = target.k;
  std::vector<Candidate> out;
  double const relation_estimate =
      n <= relation_enumeration_limit ? std::ldexp(1.0, static_cast<int>(n * (n - 1) / 2)) : 1e300;
  double const type_estimate =
      binomial(static_cast<double>(n + (std::size_t{1} << k) - 2), static_cast<double>(n));

  if (relation_estimate <= type_estimate) {
    for (auto& adj : canonical_relations(n, stats)) {
      for (auto& blocks : quotient_block_sets(adj, k, kind)) {
        ++stats.relations_accepted;
        out.push_back({n, adj, std::move(blocks)});
      }
    }
    return out;
  }

  for (auto const& tc : canonical_type_coverings(n, k, stats)) {
    std::vector<Mask> blocks(k, 0);
    std::vector<Mask> adj(n, 0);
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t b = 0; b < k; ++b) {
        if (has(tc.types[e], b)) {
          blocks[b] |= Mask{1} << e;
        }
      }
    }
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t f = 0; f < n; ++f) {
        if ((tc.types[e] & tc.types[f]) != 0) {
          adj[e] |= Mask{1} << f;
        }
      }
    }
    if (kind == SearchKind::tolerance && k == 3 && target.pair_triangle_pattern) {
      // Three blocks with all pairwise private intersections force a fourth
      // maximal clique, so this relation cannot have exactly three blocks.
      Mask const bc = blocks[0] & blocks[1] & ~blocks[2];
      Mask const bd = blocks[0] & blocks[2] & ~blocks[1];
      Mask const cd = blocks[1] & blocks[2] & ~blocks[0];
      if (bc != 0 && bd != 0 && cd != 0) {
        std::vector<ElementSet> rows;
        for (Mask a : adj) {
          rows.push_back(ElementSet::from_mask(n, a));
        }
        BinaryRelation const rel(std::move(rows));
        auto const x = static_cast<ElementId>(std::countr_zero(bc));
        auto const y = static_cast<ElementId>(std::countr_zero(bd));
        auto const z = static_cast<ElementId>(std::countr_zero(cd));
        auto b = ElementSet::from_mask(n, blocks[0]);
        auto c = ElementSet::from_mask(n, blocks[1]);
        auto d = ElementSet::from_mask(n, blocks[2]);
        if (is_maximal_clique(rel, b) && is_maximal_clique(rel, c) && is_maximal_clique(rel, d)) {
          derive_fourth_clique(rel, b, c, d, x, y, z);
        }
        ++stats.fourth_clique_prunes;
        continue;
      }
    }
    bool accept = true;
    for (std::size_t b = 0; b < k && accept; ++b) {
      accept = small_is_maximal_clique(adj, blocks[b]);
    }
    if (accept && kind == SearchKind::tolerance) {
      accept = all_maximal_cliques(adj).size() == k;
    }
    if (accept) {
      ++stats.relations_accepted;
      std::sort(blocks.begin(), blocks.end());
      out.push_back({n, std::move(adj), std::move(blocks)});
    }
  }
  return out;
}

void accumulate(SearchStats& into, SearchStats const& from) {
  into.relations_examined += from.relations_examined;
  into.relations_accepted += from.relations_accepted;
  into.coverings_examined += from.coverings_examined;
  into.bijections_examined += from.bijections_examined;
  into.table_nodes += from.table_nodes;
  into.fourth_clique_prunes += from.fourth_clique_prunes;
  into.region_prunes += from.region_prunes;
}

SearchOutcome run_search(MultiAlgebra const& target, std::size_t max_size,
                         SearchOptions const& options, SearchKind kind) {
  auto const start = std::chrono::steady_clock::now();
  std::size_t const limit =
      options.size_limit ? options.size_limit : default_search_limit(target.signature(), kind);
  if (max_size > limit || max_size > max_search_universe) {
    throw LimitError("search bound " + std::to_string(max_size) + " exceeds the limit "
                     + std::to_string(std::min(limit, max_search_universe)));
  }
  if (target.size() > max_target_size) {
    throw LimitError("search targets are limited to " + std::to_string(max_target_size)
                     + " elements");
  }
  Target const prepared = prepare_target(target);

  SearchOutcome outcome;
  outcome.stats.bound = max_size;
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  unsigned const jobs = std::max(1U, options.jobs);
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto candidates = candidates_for_size(n, prepared, kind, outcome.stats);
    std::size_t const batch = jobs == 1 ? 1 : jobs * 4;
    for (std::size_t begin = 0; begin < candidates.size(); begin += batch) {
      std::size_t const end = std::min(candidates.size(), begin + batch);
      std::uint64_t const remaining = options.node_budget > outcome.stats.table_nodes
                                          ? options.node_budget - outcome.stats.table_nodes
                                          : 0;
      std::vector<CandidateResult> results(end - begin);
      if (jobs == 1) {
        results[0] = search_candidate(candidates[begin], prepared, target.signature(), remaining);
      } else {
        std::vector<std::future<CandidateResult>> futures;
        for (std::size_t i = begin; i < end; ++i) {
          futures.push_back(std::async(std::launch::async, [&, i] {
            return search_candidate(candidates[i], prepared, target.signature(), remaining);
          }));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
          results[i] = futures[i].get();
        }
      }
      for (auto& r : results) {
        ++outcome.stats.coverings_examined;
        accumulate(outcome.stats, r.stats);
        if (r.budget_hit || outcome.stats.table_nodes > options.node_budget) {
          outcome.stats.wall_seconds = elapsed();
          throw SearchBudgetExceeded(outcome.stats);
        }
        if (r.witness) {
          outcome.stats.witness_size = n;
          outcome.stats.wall_seconds = elapsed();
          if (!replay(*r.witness, target, kind)) {
            throw VerificationFailure("search witness failed replay");
          }
          outcome.witness = std::move(r.witness);
          return outcome;
        }
      }
    }
  }
  outcome.stats.wall_seconds = elapsed();
  return outcome;
}

}  // namespace

std::size_t default_search_limit(Signature const& sig, SearchKind kind) {
  std::size_t const arity = sig.max_arity();
  if (arity <= 1) {
    return 8;
  }
  if (arity == 2) {
    return kind == SearchKind::tolerance ? 4 : 7;
  }
  return 3;
}

bool replay(RepresentationWitness const& witness, MultiAlgebra const& target, SearchKind kind) {
  try {
    QuotientResult q = kind == SearchKind::tolerance
                           ? tolerance_quotient(witness.algebra, witness.tolerance)
                           : full_covering_quotient(witness.algebra, witness.tolerance,
                                                    witness.covering);
    if (q.blocks.blocks() != witness.covering.blocks()) {
      return false;
    }
    if (q.quotient.signature() != target.signature()) {
      return false;
    }
    return is_isomorphism(q.quotient, target, witness.iso.mapping)
           && are_isomorphic(q.quotient, target).has_value();
  } catch (Error const&) {
    return false;
  }
}

SearchOutcome find_tolerance_representation(MultiAlgebra const& target, std::size_t max_size,
                                            SearchOptions const& options) {
  return run_search(target, max_size, options, SearchKind::tolerance);
}

SearchOutcome find_full_covering_representation(MultiAlgebra const& target, std::size_t max_size,
                                                SearchOptions const& options) {
  return run_search(target, max_size, options, SearchKind::full_covering);
}

}  // namespace tolquot
