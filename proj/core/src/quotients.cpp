#include "tolquot/quotients.hpp"

#include <algorithm>
#include <future>
#include <thread>

namespace tolquot {

namespace {

std::string tuple_text(std::span<ElementId const> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + std::to_string(t[i]);
  }
  return out + ")";
}

std::vector<std::string> block_labels(std::size_t k) {
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back("B" + std::to_string(i + 1));
  }
  return out;
}

std::vector<std::size_t> decode_blocks(std::size_t k, std::size_t arity, std::size_t index) {
  auto t = decode_tuple(k, arity, index);
  return {t.begin(), t.end()};
}

std::uint64_t representative_count(std::vector<std::vector<ElementId>> const& members,
                                   std::span<ElementId const> block_tuple, std::uint64_t budget) {
  std::uint64_t count = 1;
  for (ElementId b : block_tuple) {
    std::uint64_t const s = members[b].size();
    if (count > budget / s) {
      return budget + 1;
    }
    count *= s;
  }
  return count;
}

// Calls f(tuple) for every tuple in B_{i1} x ... x B_{in}, lexicographically.
template <typename F>
void for_each_representative(std::vector<std::vector<ElementId>> const& members,
                             std::span<ElementId const> block_tuple, F&& f) {
  std::size_t const k = block_tuple.size();
  std::vector<std::size_t> pos(k, 0);
  std::vector<ElementId> tuple(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i] = members[block_tuple[i]][pos[i]];
    }
    f(std::span<ElementId const>(tuple));
    std::size_t i = k;
    bool more = false;
    while (i > 0) {
      --i;
      if (++pos[i] < members[block_tuple[i]].size()) {
        more = true;
        break;
      }
      pos[i] = 0;
    }
    if (!more) {
      return;
    }
  }
}

struct Evaluation {
  std::vector<MultiOperationTable> tables;
  // First (op, block tuple index) with an empty value, in canonical order.
  std::optional<std::pair<std::size_t, std::size_t>> first_empty;
};

Evaluation evaluate_quotient(FiniteAlgebra const& alg, Covering const& blocks,
                             QuotientOptions const& options) {
  std::size_t const k = blocks.block_count();
  std::vector<std::vector<ElementId>> members;
  members.reserve(k);
  for (auto const& b : blocks.blocks()) {
    members.push_back(b.members());
  }

  Evaluation result;
  for (std::size_t op = 0; op < alg.signature().size(); ++op) {
    std::size_t const arity = alg.signature()[op].arity;
    std::size_t const count = tuple_count(k, arity);
    for (std::size_t idx = 0; idx < count; ++idx) {
      auto const bt = decode_tuple(k, arity, idx);
      if (representative_count(members, bt, options.budget) > options.budget) {
        throw ResourceExceeded("quotient value for operation '" + alg.signature()[op].name
                               + "' at block tuple " + tuple_text(bt)
                               + " needs more than " + std::to_string(options.budget)
                               + " evaluations");
      }
    }

    MultiOperationTable table{arity, std::vector<ElementSet>(count, ElementSet(k))};
    auto compute_range = [&](std::size_t begin, std::size_t end) {
      std::vector<ElementId> bt(arity);
      for (std::size_t idx = begin; idx < end; ++idx) {
        decode_tuple(k, idx, bt);
        ElementSet images(alg.size());
        for_each_representative(members, bt, [&](std::span<ElementId const> t) {
          images.set(alg.apply(op, t));
        });
        ElementSet value(k);
        for (std::size_t b = 0; b < k; ++b) {
          if (images.is_subset_of(blocks.block(b))) {
            value.set(static_cast<ElementId>(b));
          }
        }
        table.entries[idx] = std::move(value);
      }
    };

    unsigned const jobs = std::max(1U, std::min<unsigned>(options.jobs, count));
    if (jobs == 1) {
      compute_range(0, count);
    } else {
      std::vector<std::future<void>> parts;
      std::size_t const chunk = (count + jobs - 1) / jobs;
      for (std::size_t begin = 0; begin < count; begin += chunk) {
        parts.push_back(std::async(std::launch::async, compute_range, begin,
                                   std::min(count, begin + chunk)));
      }
      for (auto& p : parts) {
        p.get();
      }
    }
    if (!result.first_empty) {
      for (std::size_t idx = 0; idx < count; ++idx) {
        if (table.entries[idx].empty()) {
          result.first_empty = std::pair{op, idx};
          break;
        }
      }
    }
    result.tables.push_back(std::move(table));
  }
  return result;
}

MultiAlgebra assemble(FiniteAlgebra const& alg, std::size_t k,
                      std::vector<MultiOperationTable> tables) {
  std::vector<NamedTable<MultiOperationTable>> ops;
  for (std::size_t op = 0; op < tables.size(); ++op) {
    ops.push_back({alg.signature()[op].name, std::move(tables[op])});
  }
  return MultiAlgebra(k, std::move(ops), block_labels(k));
}

}  // namespace

char const* construction_name(Construction c) {
  return c == Construction::tolerance ? "tolerance" : "full_covering";
}

EmptyValue::EmptyValue(std::string op, std::vector<std::size_t> block_tuple)
    : Error([&] {
        std::string msg = "empty value for operation '" + op + "' at block tuple (";
        for (std::size_t i = 0; i < block_tuple.size(); ++i) {
          msg += (i ? "," : "") + std::to_string(block_tuple[i]);
        }
        return msg + "): the quotient is not a multi-algebra";
      }()),
      op_(std::move(op)),
      block_tuple_(std::move(block_tuple)) {}

QuotientResult tolerance_quotient(FiniteAlgebra const& alg, BinaryRelation const& tol,
                                  QuotientOptions const& options) {
  require_tolerance(alg, tol);
  Covering blocks = maximal_cliques(tol);
  auto eval = evaluate_quotient(alg, blocks, options);
  if (eval.first_empty) {
    auto [op, idx] = *eval.first_empty;
    throw VerificationFailure(
        "tolerance quotient produced an empty value for operation '" + alg.signature()[op].name
        + "' at block tuple index " + std::to_string(idx));
  }
  std::size_t const k = blocks.block_count();
  return {assemble(alg, k, std::move(eval.tables)), std::move(blocks), Construction::tolerance};
}

QuotientResult full_covering_quotient(FiniteAlgebra const& alg, BinaryRelation const& tol,
                                      Covering const& cov, QuotientOptions const& options) {
  if (cov.universe_size() != alg.size()) {
    throw ArgumentError("covering size does not match algebra size");
  }
  if (auto v = find_full_covering_violation(alg, tol, cov)) {
    throw NotFullCovering(*v);
  }
  auto eval = evaluate_quotient(alg, cov, options);
  std::size_t const k = cov.block_count();
  if (eval.first_empty) {
    auto [op, idx] = *eval.first_empty;
    throw EmptyValue(alg.signature()[op].name, decode_blocks(k, alg.signature()[op].arity, idx));
  }
  return {assemble(alg, k, std::move(eval.tables)), cov, Construction::full_covering};
}

std::optional<DeterminacyCounterWitness> check_block_determinacy(FiniteAlgebra const& alg,
                                                                 BinaryRelation const& tol,
                                                                 QuotientOptions const& options) {
  require_tolerance(alg, tol);
  Covering const blocks = maximal_cliques(tol);
  std::size_t const k = blocks.block_count();
  std::vector<std::vector<ElementId>> members;
  for (auto const& b : blocks.blocks()) {
    members.push_back(b.members());
  }
  for (std::size_t op = 0; op < alg.signature().size(); ++op) {
    std::size_t const arity = alg.signature()[op].arity;
    std::vector<ElementId> bt(arity, 0);
    do {
      if (representative_count(members, bt, options.budget) > options.budget) {
        throw ResourceExceeded("determinacy check for operation '" + alg.signature()[op].name
                               + "' at block tuple " + tuple_text(bt) + " exceeds the budget");
      }
      std::vector<std::vector<ElementId>> tuples;
      std::vector<ElementId> images;
      for_each_representative(members, bt, [&](std::span<ElementId const> t) {
        tuples.emplace_back(t.begin(), t.end());
        images.push_back(alg.apply(op, t));
      });
      for (std::size_t b = 0; b < k; ++b) {
        std::optional<std::size_t> in;
        std::optional<std::size_t> out;
        for (std::size_t i = 0; i < images.size() && !(in && out); ++i) {
          if (blocks.block(b).test(images[i])) {
            if (!in) in = i;
          } else if (!out) {
            out = i;
          }
        }
        if (in && out) {
          return DeterminacyCounterWitness{alg.signature()[op].name,
                                           {bt.begin(), bt.end()},
                                           b,
                                           tuples[*in],
                                           tuples[*out]};
        }
      }
    } while (next_tuple(bt, k));
  }
  return std::nullopt;
}

std::string describe(DeterminacyCounterWitness const& w, Covering const& blocks) {
  std::string bt = "(";
  for (std::size_t i = 0; i < w.block_tuple.size(); ++i) {
    bt += (i ? "," : "") + to_string(blocks.block(w.block_tuple[i]));
  }
  bt += ")";
  return "operation '" + w.op + "' at block tuple " + bt + ": image of " + tuple_text(w.tuple_in)
         + " lies in block " + to_string(blocks.block(w.block)) + " but image of "
         + tuple_text(w.tuple_out) + " does not";
}


DeterminacySweepReport sweep_unary_determinacy(std::size_t max_size) {
  if (max_size > 6) {
    throw LimitError("determinacy sweep is limited to |A| <= 6");
  }
  DeterminacySweepReport report;
  report.max_size = max_size;
  for (std::size_t n = 1; n <= max_size; ++n) {
    std::vector<ElementPair> edges;
    for (ElementId a = 0; a < n; ++a) {
      for (ElementId b = a + 1; b < n; ++b) {
        edges.emplace_back(a, b);
      }
    }
    std::vector<BinaryRelation> relations;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
      std::vector<ElementPair> chosen;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if ((mask >> e) & 1U) {
          chosen.push_back(edges[e]);
        }
      }
      relations.push_back(BinaryRelation::from_pairs(n, chosen));
    }
    std::vector<ElementId> table(n, 0);
    do {
      FiniteAlgebra const alg(n, {{"f", OperationTable{1, table}}});
      ++report.algebras;
      for (auto const& rel : relations) {
        ++report.relations;
        if (!is_tolerance(alg, rel)) {
          continue;
        }
        ++report.tolerances;
        if (auto w = check_block_determinacy(alg, rel)) {
          ++report.counterexamples;
          if (!report.first) {
            report.first = DeterminacyCounterexample{alg, rel, std::move(*w)};
          }
        } else {
          ++report.determinate;
        }
      }
    } while (next_tuple(table, n));
  }
  return report;
}

}  // namespace tolquot
