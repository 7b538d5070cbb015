#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tolquot/errors.hpp"
#include "tolquot/iso_search.hpp"
#include "tolquot/powerset.hpp"
#include "tolquot/quotients.hpp"
#include "tolquot/realization.hpp"
#include "tolquot/structure_io.hpp"

namespace tolquot::cli {

using nlohmann::json;

namespace {

// Bad command-line values that CLI11 cannot catch by itself.
class UsageError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::string format = "table";
  std::string output;
  std::size_t max_size = 0;
  std::uint64_t budget = 0;
  unsigned jobs = 1;
  bool strict_relations = false;
  std::uint64_t seed = 1;
};

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T load(std::string const& path, Globals const& g) {
  try {
    return parse_as<T>(read_file(path), ParseOptions{g.strict_relations});
  } catch (Error const& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Targets may be given as plain algebras too.
MultiAlgebra load_multi(std::string const& path, Globals const& g) {
  Structure s = [&] {
    try {
      return parse_structure(read_file(path), ParseOptions{g.strict_relations});
    } catch (InputError const&) {
      throw;
    } catch (Error const& e) {
      throw InputError(path + ": " + e.what());
    }
  }();
  if (auto const* alg = std::get_if<FiniteAlgebra>(&s)) {
    return as_multialgebra(*alg);
  }
  if (auto const* ma = std::get_if<MultiAlgebra>(&s)) {
    return *ma;
  }
  throw InputError(path + ": expected an algebra or multialgebra, got " + kind_of(s));
}

json doc(std::string const& canonical) { return json::parse(canonical); }

template <typename T>
json doc_of(T const& s) {
  return doc(serialize(s));
}

json ids(std::span<ElementId const> v) { return json(std::vector<ElementId>(v.begin(), v.end())); }

json members(ElementSet const& s) { return json(s.members()); }

using Namer = std::function<std::string(ElementId)>;

std::string set_text(ElementSet const& s, Namer const& name) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](ElementId e) {
    out += (first ? "" : ",") + name(e);
    first = false;
  });
  return out + "}";
}

std::string tuple_text(std::span<ElementId const> t, Namer const& name) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? "," : "") + name(t[i]);
  }
  return out + ")";
}

std::string multi_tables(MultiAlgebra const& ma, Namer const& name) {
  std::string out;
  for (std::size_t op = 0; op < ma.signature().size(); ++op) {
    auto const& sym = ma.signature()[op];
    auto const& entries = ma.table(op).entries;
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      auto const args = decode_tuple(ma.size(), sym.arity, idx);
      out += sym.name + tuple_text(args, name) + " = " + set_text(entries[idx], name) + "\n";
    }
  }
  return out;
}

std::string algebra_tables(FiniteAlgebra const& alg) {
  std::string out;
  auto name = [&](ElementId e) { return alg.display_name(e); };
  for (std::size_t op = 0; op < alg.signature().size(); ++op) {
    auto const& sym = alg.signature()[op];
    auto const& entries = alg.table(op).entries;
    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
      auto const args = decode_tuple(alg.size(), sym.arity, idx);
      out += sym.name + tuple_text(args, name) + " = " + name(entries[idx]) + "\n";
    }
  }
  return out;
}

std::string pair_list(BinaryRelation const& rel) {
  std::string out;
  for (ElementId a = 0; a < rel.size(); ++a) {
    for (ElementId b = a + 1; b < rel.size(); ++b) {
      if (rel.related(a, b)) {
        out += (out.empty() ? "" : " ") + rel.display_name(a) + "~" + rel.display_name(b);
      }
    }
  }
  return out.empty() ? "(diagonal only)" : out;
}

std::string block_list(Covering const& cov, Namer const& name, std::string const& prefix = "B") {
  std::string out;
  for (std::size_t i = 0; i < cov.block_count(); ++i) {
    out += "  " + prefix + std::to_string(i + 1) + " = " + set_text(cov.block(i), name) + "\n";
  }
  return out;
}

json violation_json(SubstitutionViolation const& v) {
  return {{"op", v.op}, {"lhs", ids(v.lhs)}, {"rhs", ids(v.rhs)},
          {"lhs_image", v.lhs_image}, {"rhs_image", v.rhs_image}};
}

json violation_json(FullCoveringViolation const& v) {
  return {{"kind", kind_name(v.kind)}, {"block", v.block}, {"other", v.other},
          {"a", v.a}, {"b", v.b}};
}

std::string witness_text(DeterminacyCounterWitness const& w, BinaryRelation const& rel) {
  auto const blocks = maximal_cliques(rel);
  auto elem = [&](ElementId e) { return rel.display_name(e); };
  std::string bt = "(";
  for (std::size_t i = 0; i < w.block_tuple.size(); ++i) {
    bt += (i ? "," : "") + set_text(blocks.block(w.block_tuple[i]), elem);
  }
  return "operation '" + w.op + "' at block tuple " + bt + "): image of "
         + tuple_text(w.tuple_in, elem) + " lies in block " + set_text(blocks.block(w.block), elem)
         + " but image of " + tuple_text(w.tuple_out, elem) + " does not";
}

json witness_json(DeterminacyCounterWitness const& w) {
  return {{"op", w.op}, {"block_tuple", w.block_tuple}, {"block", w.block},
          {"tuple_in", ids(w.tuple_in)}, {"tuple_out", ids(w.tuple_out)}};
}

json quotient_json(QuotientResult const& q) {
  return {{"construction", construction_name(q.construction)},
          {"blocks", doc_of(q.blocks)},
          {"quotient", doc_of(q.quotient)}};
}

json stats_json(SearchStats const& s) {
  return {{"bound", s.bound},
          {"relations_examined", s.relations_examined},
          {"relations_accepted", s.relations_accepted},
          {"coverings_examined", s.coverings_examined},
          {"bijections_examined", s.bijections_examined},
          {"table_nodes", s.table_nodes},
          {"fourth_clique_prunes", s.fourth_clique_prunes},
          {"region_prunes", s.region_prunes},
          {"witness_size", s.witness_size},
          {"wall_seconds", s.wall_seconds}};
}

std::string stats_text(SearchStats const& s) {
  std::ostringstream o;
  o << "  bound:                " << s.bound << "\n"
    << "  relations examined:   " << s.relations_examined << "\n"
    << "  relations accepted:   " << s.relations_accepted << "\n"
    << "  coverings examined:   " << s.coverings_examined << "\n"
    << "  bijections examined:  " << s.bijections_examined << "\n"
    << "  table nodes:          " << s.table_nodes << "\n"
    << "  fourth-clique prunes: " << s.fourth_clique_prunes << "\n"
    << "  region prunes:        " << s.region_prunes << "\n";
  return o.str();
}

std::vector<std::string> split_list(std::string const& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Display names first, then numeric ids.
ElementId resolve_element(BinaryRelation const& rel, std::string const& token) {
  auto const& names = rel.names();
  if (auto it = std::find(names.begin(), names.end(), token); it != names.end()) {
    return static_cast<ElementId>(it - names.begin());
  }
  if (!token.empty() && std::all_of(token.begin(), token.end(), ::isdigit)) {
    auto const v = std::stoull(token);
    if (v < rel.size()) {
      return static_cast<ElementId>(v);
    }
  }
  throw UsageError("unknown element '" + token + "'");
}

std::vector<ElementId> parse_ids(std::string const& text) {
  std::vector<ElementId> out;
  for (auto const& tok : split_list(text)) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
      throw UsageError("expected a comma-separated list of indices, got '" + text + "'");
    }
    out.push_back(static_cast<ElementId>(std::stoul(tok)));
  }
  return out;
}

// Payload plus verdict; the caller routes it to stdout or --output.
struct Result {
  int code = exit_ok;
  std::string text;
  json data;
  std::string dot;
};

// ---- commands --------------------------------------------------------------

Result cmd_check_tolerance(Globals const& g, std::string const& alg_path,
                           std::string const& rel_path) {
  auto const alg = load<FiniteAlgebra>(alg_path, g);
  auto const rel = load<BinaryRelation>(rel_path, g);
  auto const v = find_substitution_violation(alg, rel);
  Result r;
  r.code = v ? exit_negative : exit_ok;
  r.data = {{"tolerance", !v}, {"violation", v ? violation_json(*v) : json(nullptr)}};
  r.text = v ? "not a tolerance: " + describe(*v) + "\n" : std::string("tolerance: yes\n");
  r.dot = export_dot(rel);
  return r;
}

Result cmd_blocks(Globals const& g, std::string const& rel_path) {
  auto const rel = load<BinaryRelation>(rel_path, g);
  auto const cov = maximal_cliques(rel);
  Result r;
  r.data = doc_of(cov);
  r.text = std::to_string(cov.block_count()) + " maximal cliques\n"
           + block_list(cov, [&](ElementId e) { return rel.display_name(e); });
  r.dot = export_dot(rel, &cov);
  return r;
}

Result cmd_induced(Globals const& g, std::string const& cov_path) {
  auto const cov = load<Covering>(cov_path, g);
  auto const rel = induced_relation(cov);
  Result r;
  r.data = doc_of(rel);
  r.text = "induced relation: " + pair_list(rel) + "\n";
  r.dot = export_dot(rel, &cov);
  return r;
}

Result cmd_full_covering(Globals const& g, std::string const& alg_path, std::string const& rel_path,
                         std::string const& cov_path) {
  auto const alg = load<FiniteAlgebra>(alg_path, g);
  auto const rel = load<BinaryRelation>(rel_path, g);
  BlockFamily family;
  try {
    family = parse_block_family(read_file(cov_path));
  } catch (InputError const&) {
    throw;
  } catch (Error const& e) {
    throw InputError(cov_path + ": " + e.what());
  }
  if (family.universe_size != rel.size()) {
    throw InputError("covering has " + std::to_string(family.universe_size)
                     + " elements but the relation has " + std::to_string(rel.size()));
  }
  auto const v = find_full_covering_violation(alg, rel, family.blocks);
  Result r;
  r.code = v ? exit_negative : exit_ok;
  r.data = {{"full_covering", !v}, {"violation", v ? violation_json(*v) : json(nullptr)}};
  r.text = v ? "not a full covering: " + describe(*v) + "\n" : std::string("full covering: yes\n");
  return r;
}

Result quotient_result(QuotientResult const& q, BinaryRelation const& rel) {
  Result r;
  r.data = quotient_json(q);
  auto elem = [&](ElementId e) { return rel.display_name(e); };
  auto block = [&](ElementId b) { return "B" + std::to_string(b + 1); };
  r.text = std::string("construction: ") + construction_name(q.construction) + "\n"
           + std::to_string(q.blocks.block_count()) + " blocks\n" + block_list(q.blocks, elem)
           + multi_tables(q.quotient, block);
  return r;
}

Result cmd_quotient(Globals const& g, std::string const& alg_path, std::string const& rel_path) {
  auto const alg = load<FiniteAlgebra>(alg_path, g);
  auto const rel = load<BinaryRelation>(rel_path, g);
  QuotientOptions opts;
  opts.jobs = g.jobs;
  if (g.budget) {
    opts.budget = g.budget;
  }
  try {
    return quotient_result(tolerance_quotient(alg, rel, opts), rel);
  } catch (NotATolerance const& e) {
    Result r;
    r.code = exit_negative;
    r.data = {{"error", "not_a_tolerance"}, {"violation", violation_json(e.witness())}};
    r.text = std::string(e.what()) + "\n";
    return r;
  }
}

Result cmd_fc_quotient(Globals const& g, std::string const& alg_path, std::string const& rel_path,
                       std::string const& cov_path) {
  auto const alg = load<FiniteAlgebra>(alg_path, g);
  auto const rel = load<BinaryRelation>(rel_path, g);
  auto const cov = load<Covering>(cov_path, g);
  QuotientOptions opts;
  opts.jobs = g.jobs;
  if (g.budget) {
    opts.budget = g.budget;
  }
  Result r;
  try {
    return quotient_result(full_covering_quotient(alg, rel, cov, opts), rel);
  } catch (NotATolerance const& e) {
    r.data = {{"error", "not_a_tolerance"}, {"violation", violation_json(e.witness())}};
    r.text = std::string(e.what()) + "\n";
  } catch (NotFullCovering const& e) {
    r.data = {{"error", "not_full_covering"}, {"violation", violation_json(e.witness())}};
    r.text = std::string(e.what()) + "\n";
  } catch (EmptyValue const& e) {
    r.data = {{"error", "empty_value"}, {"op", e.op()}, {"block_tuple", e.block_tuple()}};
    r.text = std::string(e.what()) + "\n";
  }
  r.code = exit_negative;
  return r;
}

json sweep_json(DeterminacySweepReport const& rep) {
  json first = nullptr;
  if (rep.first) {
    first = {{"algebra", doc_of(rep.first->algebra)},
             {"tolerance", doc_of(rep.first->tolerance)},
             {"witness", witness_json(rep.first->witness)}};
  }
  return {{"max_size", rep.max_size},
          {"algebras", rep.algebras},
          {"relations", rep.relations},
          {"tolerances", rep.tolerances},
          {"determinate", rep.determinate},
          {"counterexamples", rep.counterexamples},
          {"first_counterexample", first}};
}

Result cmd_determinacy(Globals const& g, std::string const& alg_path, std::string const& rel_path,
                       std::size_t sweep) {
  Result r;
  if (sweep) {
    auto const rep = sweep_unary_determinacy(sweep);
    r.data = sweep_json(rep);
    std::ostringstream o;
    o << "unary algebras with |A| <= " << rep.max_size << ": " << rep.algebras << "\n"
      << "relations examined: " << rep.relations << "\n"
      << "tolerances: " << rep.tolerances << "\n"
      << "determinate: " << rep.determinate << "\n"
      << "counterexamples: " << rep.counterexamples << "\n";
    if (rep.first) {
      o << "first counterexample: f = " << doc_of(rep.first->algebra)["operations"][0]["table"].dump()
        << ", tolerance " << pair_list(rep.first->tolerance) << "\n  "
        << witness_text(rep.first->witness, rep.first->tolerance) << "\n";
    } else {
      o << "determinate everywhere\n";
    }
    r.text = o.str();
    return r;
  }
  if (alg_path.empty() || rel_path.empty()) {
    throw UsageError("determinacy needs --algebra and --tolerance, or --sweep-unary N");
  }
  auto const alg = load<FiniteAlgebra>(alg_path, g);
  auto const rel = load<BinaryRelation>(rel_path, g);
  try {
    auto const w = check_block_determinacy(alg, rel);
    r.code = w ? exit_negative : exit_ok;
    r.data = {{"determinate", !w}, {"witness", w ? witness_json(*w) : json(nullptr)}};
    r.text = w ? "not determinate: " + witness_text(*w, rel) + "\n"
               : std::string("determinate\n");
  } catch (NotATolerance const& e) {
    r.code = exit_negative;
    r.data = {{"error", "not_a_tolerance"}, {"violation", violation_json(e.witness())}};
    r.text = std::string(e.what()) + "\n";
  }
  return r;
}

void write_text(std::filesystem::path const& path, std::string const& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw InputError("cannot write '" + path.string() + "'");
  }
}

// Writes the bundle into `dir` when it is nonempty; --output is a directory
// for this command.
Result cmd_realize(Globals const& g, std::string const& path, std::string const& dir) {
  auto const m = load_multi(path, g);
  RealizationOptions opts;
  opts.quotient.jobs = g.jobs;
  if (g.budget) {
    opts.quotient.budget = g.budget;
  }
  if (g.max_size) {
    opts.size_limit = g.max_size;
  }
  auto const b = realize(m, opts);
  Result r;
  r.data = {{"isomorphic", true},
            {"iso", ids(b.iso)},
            {"algebra", doc_of(b.power_algebra)},
            {"tolerance", doc_of(b.nu)},
            {"covering", doc_of(b.filters)},
            {"quotient", doc_of(b.quotient.quotient)}};
  std::string legend;
  for (std::size_t k = 0; k < b.iso.size(); ++k) {
    legend += "  S_" + std::to_string(k + 1) + " = M_" + m.display_name(b.iso[k]) + " = "
              + set_text(b.filters.block(k), [&](ElementId e) { return b.nu.display_name(e); })
              + " ↦ " + m.display_name(b.iso[k]) + "\n";
  }
  if (!dir.empty()) {
    std::filesystem::path const d(dir);
    std::filesystem::create_directories(d);
    write_text(d / "algebra.json", serialize(b.power_algebra));
    write_text(d / "tolerance.json", serialize(b.nu));
    write_text(d / "covering.json", serialize(b.filters));
    write_text(d / "quotient.json", serialize(b.quotient.quotient));
    write_text(d / "legend.txt", legend);
    r.data["files"] = {"algebra.json", "tolerance.json", "covering.json", "quotient.json",
                       "legend.txt"};
  }
  r.text = "power-set algebra: " + std::to_string(b.power_algebra.size()) + " elements\n"
           + "non-disjointness: tolerance\n" + "principal filters: full covering, "
           + std::to_string(b.filters.block_count()) + " blocks\n"
           + "isomorphic: yes (S_k ↦ k)\n" + legend
           + (dir.empty() ? "" : "bundle written to " + dir + "\n");
  return r;
}

Result cmd_iso(Globals const& g, std::string const& lhs_path, std::string const& rhs_path) {
  auto const lhs = load_multi(lhs_path, g);
  auto const rhs = load_multi(rhs_path, g);
  auto const w = are_isomorphic(lhs, rhs);
  Result r;
  r.code = w ? exit_ok : exit_negative;
  r.data = {{"isomorphic", w.has_value()}, {"mapping", w ? ids(w->mapping) : json(nullptr)}};
  if (w) {
    r.text = "isomorphic: yes\n";
    for (ElementId e = 0; e < lhs.size(); ++e) {
      r.text += "  " + lhs.display_name(e) + " ↦ " + rhs.display_name(w->mapping[e]) + "\n";
    }
  } else {
    r.text = "isomorphic: no\n";
  }
  return r;
}

Result cmd_represent(Globals const& g, std::string const& path, SearchKind kind) {
  auto const target = load_multi(path, g);
  SearchOptions opts;
  opts.jobs = g.jobs;
  if (g.budget) {
    opts.node_budget = g.budget;
  }
  std::size_t const bound = g.max_size ? g.max_size : default_search_limit(target.signature(), kind);
  auto const outcome = kind == SearchKind::tolerance
                           ? find_tolerance_representation(target, bound, opts)
                           : find_full_covering_representation(target, bound, opts);
  Result r;
  r.data = {{"kind", kind == SearchKind::tolerance ? "tolerance" : "full_covering"},
            {"bound", bound},
            {"stats", stats_json(outcome.stats)}};
  if (!outcome.witness) {
    r.code = exit_negative;
    r.data["verdict"] = "exhausted_none";
    r.data["witness"] = nullptr;
    r.text = "ExhaustedNone at bound " + std::to_string(bound) + "\n" + stats_text(outcome.stats);
    return r;
  }
  auto const& w = *outcome.witness;
  r.data["verdict"] = "witness";
  r.data["witness"] = {{"algebra", doc_of(w.algebra)},
                       {"tolerance", doc_of(w.tolerance)},
                       {"covering", doc_of(w.covering)},
                       {"iso", ids(w.iso.mapping)}};
  auto elem = [&](ElementId e) { return w.tolerance.display_name(e); };
  std::string text = "witness with |A| = " + std::to_string(w.algebra.size()) + "\n"
                     + algebra_tables(w.algebra) + "tolerance: " + pair_list(w.tolerance) + "\n"
                     + "blocks:\n" + block_list(w.covering, elem);
  for (std::size_t k = 0; k < w.iso.mapping.size(); ++k) {
    text += "  B" + std::to_string(k + 1) + " ↦ " + target.display_name(w.iso.mapping[k]) + "\n";
  }
  r.text = text + stats_text(outcome.stats);
  return r;
}

Result cmd_fourth_clique(Globals const& g, std::string const& rel_path,
                         std::string const& blocks_arg, std::string const& elements_arg) {
  auto const rel = load<BinaryRelation>(rel_path, g);
  auto const cliques = maximal_cliques(rel);
  std::size_t const k = cliques.block_count();
  auto privates = [&](std::size_t b, std::size_t c, std::size_t d) {
    return std::array<ElementSet, 3>{(cliques.block(b) & cliques.block(c)) - cliques.block(d),
                                     (cliques.block(b) & cliques.block(d)) - cliques.block(c),
                                     (cliques.block(c) & cliques.block(d)) - cliques.block(b)};
  };
  std::optional<std::array<std::size_t, 3>> triple;
  if (!blocks_arg.empty()) {
    auto const v = parse_ids(blocks_arg);
    if (v.size() != 3) {
      throw UsageError("--blocks needs exactly three indices");
    }
    for (auto i : v) {
      if (i >= k) {
        throw UsageError("block index " + std::to_string(i) + " out of range (" + std::to_string(k)
                         + " maximal cliques)");
      }
    }
    triple = std::array<std::size_t, 3>{v[0], v[1], v[2]};
  } else {
    for (std::size_t b = 0; b < k && !triple; ++b) {
      for (std::size_t c = b + 1; c < k && !triple; ++c) {
        for (std::size_t d = c + 1; d < k && !triple; ++d) {
          auto const p = privates(b, c, d);
          if (!p[0].empty() && !p[1].empty() && !p[2].empty()) {
            triple = std::array<std::size_t, 3>{b, c, d};
          }
        }
      }
    }
  }
  Result r;
  if (!triple) {
    r.code = exit_negative;
    r.data = {{"clique", nullptr}};
    r.text = "no three maximal cliques with pairwise private intersections\n";
    return r;
  }
  auto const [b, c, d] = *triple;
  std::array<ElementId, 3> xyz{};
  if (!elements_arg.empty()) {
    auto const toks = split_list(elements_arg);
    if (toks.size() != 3) {
      throw UsageError("--elements needs exactly three elements");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      xyz[i] = resolve_element(rel, toks[i]);
    }
  } else {
    auto const p = privates(b, c, d);
    for (std::size_t i = 0; i < 3; ++i) {
      if (p[i].empty()) {
        throw UsageError("the chosen blocks have an empty private intersection");
      }
      xyz[i] = *p[i].first();
    }
  }
  ElementSet clique(rel.size());
  try {
    clique = derive_fourth_clique(rel, cliques.block(b), cliques.block(c), cliques.block(d),
                                  xyz[0], xyz[1], xyz[2]);
  } catch (ArgumentError const& e) {
    throw UsageError(e.what());
  }
  auto elem = [&](ElementId e) { return rel.display_name(e); };
  r.data = {{"blocks", {b, c, d}},
            {"elements", ids(xyz)},
            {"clique", members(clique)},
            {"maximal_cliques", k}};
  r.text = "blocks B" + std::to_string(b + 1) + ", B" + std::to_string(c + 1) + ", B"
           + std::to_string(d + 1) + "; elements " + tuple_text(xyz, elem) + "\n"
           + "clique " + set_text(clique, elem) + " lies in none of them\n"
           + "maximal cliques: " + std::to_string(k) + "\n";
  return r;
}

Result cmd_dot(Globals const& g, std::string const& rel_path, std::string const& cov_path) {
  auto const rel = load<BinaryRelation>(rel_path, g);
  Result r;
  if (cov_path.empty()) {
    r.dot = export_dot(rel);
  } else {
    auto const cov = load<Covering>(cov_path, g);
    if (cov.universe_size() != rel.size()) {
      throw InputError("covering and relation sizes differ");
    }
    r.dot = export_dot(rel, &cov);
  }
  r.text = r.dot;
  return r;
}

// ---- generators --------------------------------------------------------------

MultiAlgebra pair_groupoid() {
  std::vector<ElementSet> t;
  for (ElementId a = 0; a < 3; ++a) {
    for (ElementId b = 0; b < 3; ++b) {
      t.push_back(ElementSet::of(3, {a, b}));
    }
  }
  return MultiAlgebra(3, {{"+", MultiOperationTable{2, std::move(t)}}}, {"1", "2", "3"});
}

std::vector<std::size_t> parse_arities(std::string const& text) {
  std::vector<std::size_t> out;
  for (auto id : parse_ids(text)) {
    out.push_back(id);
  }
  return out;
}

Result cmd_gen(Globals const& g, std::string const& what, unsigned m, std::size_t size,
               std::string const& kind, std::string const& arities_text) {
  Result r;
  if (what == "pow3-plus") {
    r.text = serialize(powerset_algebra(pair_groupoid()));
  } else if (what == "example2") {
    r.text = serialize(pair_groupoid());
  } else if (what == "nondisjoint") {
    r.text = serialize(nondisjointness(m));
  } else if (what == "principal-filters") {
    if (m == 0 || m > 16) {
      throw UsageError("--m must be in 1..16");
    }
    r.text = serialize(principal_filter_covering(m));
  } else if (what == "random") {
    if (size == 0 || size > 64) {
      throw UsageError("--size must be in 1..64");
    }
    std::mt19937_64 rng(g.seed);
    auto arities = parse_arities(arities_text);
    auto names = [&] {
      std::vector<std::string> n;
      for (std::size_t i = 0; i < arities.size(); ++i) {
        n.push_back("f" + std::to_string(i));
      }
      return n;
    }();
    std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(size - 1));
    if (kind == "algebra") {
      std::vector<NamedTable<OperationTable>> ops;
      for (std::size_t i = 0; i < arities.size(); ++i) {
        OperationTable t{arities[i], std::vector<ElementId>(tuple_count(size, arities[i]))};
        for (auto& e : t.entries) {
          e = pick(rng);
        }
        ops.push_back({names[i], std::move(t)});
      }
      r.text = serialize(FiniteAlgebra(size, std::move(ops)));
    } else if (kind == "multialgebra") {
      std::vector<NamedTable<MultiOperationTable>> ops;
      std::bernoulli_distribution coin(0.4);
      for (std::size_t i = 0; i < arities.size(); ++i) {
        MultiOperationTable t{arities[i], {}};
        for (std::size_t idx = 0; idx < tuple_count(size, arities[i]); ++idx) {
          ElementSet v(size);
          v.set(pick(rng));
          for (ElementId e = 0; e < size; ++e) {
            if (coin(rng)) {
              v.set(e);
            }
          }
          t.entries.push_back(std::move(v));
        }
        ops.push_back({names[i], std::move(t)});
      }
      r.text = serialize(MultiAlgebra(size, std::move(ops)));
    } else if (kind == "relation") {
      std::bernoulli_distribution coin(0.5);
      std::vector<ElementPair> pairs;
      for (ElementId a = 0; a < size; ++a) {
        for (ElementId b = a + 1; b < size; ++b) {
          if (coin(rng)) {
            pairs.emplace_back(a, b);
          }
        }
      }
      r.text = serialize(BinaryRelation::from_pairs(size, pairs));
    } else {
      throw UsageError("--kind must be algebra, multialgebra or relation");
    }
  } else {
    throw UsageError("unknown generator '" + what
                     + "' (pow3-plus, example2, nondisjoint, principal-filters, random)");
  }
  r.data = doc(r.text);
  return r;
}

}  // namespace

std::string export_dot(BinaryRelation const& rel, Covering const* cov) {
  static constexpr std::array<char const*, 10> palette{
      "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
      "#a65628", "#f781bf", "#999999", "#66c2a5", "#ffd92f"};
  if (cov && cov->universe_size() != rel.size()) {
    throw ArgumentError("covering has " + std::to_string(cov->universe_size())
                        + " elements but the relation has " + std::to_string(rel.size()));
  }
  auto quoted = [](std::string const& s) {
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"' || ch == '\\') {
        out += '\\';
      }
      out += ch;
    }
    return out + "\"";
  };
  std::ostringstream o;
  o << "graph relation {\n  node [shape=circle];\n";
  if (cov) {
    for (std::size_t b = 0; b < cov->block_count(); ++b) {
      o << "  // block " << b + 1 << " " << palette[b % palette.size()] << ": "
        << to_string(cov->block(b)) << "\n";
    }
  }
  for (ElementId e = 0; e < rel.size(); ++e) {
    o << "  n" << e << " [label=" << quoted(rel.display_name(e));
    if (cov) {
      std::string colors;
      std::size_t count = 0;
      for (std::size_t b = 0; b < cov->block_count(); ++b) {
        if (cov->block(b).test(e)) {
          colors += (count++ ? ":" : "") + std::string(palette[b % palette.size()]);
        }
      }
      if (count == 1) {
        o << ", style=filled, fillcolor=" << quoted(colors);
      } else if (count > 1) {
        o << ", style=wedged, fillcolor=" << quoted(colors);
      }
    }
    o << "];\n";
  }
  for (ElementId a = 0; a < rel.size(); ++a) {
    for (ElementId b = a + 1; b < rel.size(); ++b) {
      if (rel.related(a, b)) {
        o << "  n" << a << " -- n" << b << ";\n";
      }
    }
  }
  o << "}\n";
  return o.str();
}

CommandOutcome run(std::vector<std::string> const& args) {
  CLI::App app{"Tolerance quotients of finite algebras and multi-algebras", "tolquot"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "dot"}));
  app.add_option("--output", g.output, "Write the result to PATH (a directory for realize)");
  app.add_option("--max-size", g.max_size, "Size bound for searches and realization");
  app.add_option("--budget", g.budget, "Work budget (quotient tuples or search nodes)");
  app.add_option("--jobs", g.jobs, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1U, 256U));
  app.add_flag("--strict-relations", g.strict_relations,
               "Reject relation files that are not explicitly reflexive and symmetric");
  app.add_option("--seed", g.seed, "Seed for random generators");

  std::string algebra, relation, covering, multi, lhs, rhs, target, blocks, elements, what, kind;
  std::string arities = "2";
  std::size_t sweep = 0;
  std::size_t size = 4;
  unsigned m = 3;
  std::function<Result()> action;

  auto sub = [&](char const* name, char const* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto add_relation = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--relation,--tolerance", relation, "Relation file");
    if (required) {
      opt->required();
    }
  };

  auto* s = sub("check-tolerance", "Check the Substitution Property");
  s->add_option("--algebra", algebra, "Algebra file")->required();
  add_relation(s, true);
  s->callback([&] { action = [&] { return cmd_check_tolerance(g, algebra, relation); }; });

  s = sub("blocks", "List the maximal cliques of a relation");
  add_relation(s, true);
  s->callback([&] { action = [&] { return cmd_blocks(g, relation); }; });

  s = sub("induced", "Relation induced by a covering");
  s->add_option("--covering", covering, "Covering file")->required();
  s->callback([&] { action = [&] { return cmd_induced(g, covering); }; });

  s = sub("full-covering", "Check that a covering is a full covering of a tolerance");
  s->add_option("--algebra", algebra, "Algebra file")->required();
  add_relation(s, true);
  s->add_option("--covering", covering, "Covering file")->required();
  s->callback([&] { action = [&] { return cmd_full_covering(g, algebra, relation, covering); }; });

  s = sub("quotient", "Tolerance quotient on all blocks");
  s->add_option("--algebra", algebra, "Algebra file")->required();
  add_relation(s, true);
  s->callback([&] { action = [&] { return cmd_quotient(g, algebra, relation); }; });

  s = sub("fc-quotient", "Full covering quotient");
  s->add_option("--algebra", algebra, "Algebra file")->required();
  add_relation(s, true);
  s->add_option("--covering", covering, "Covering file")->required();
  s->callback([&] { action = [&] { return cmd_fc_quotient(g, algebra, relation, covering); }; });

  s = sub("determinacy", "Block determinacy of a tolerance, or a sweep over unary algebras");
  s->add_option("--algebra", algebra, "Algebra file");
  add_relation(s, false);
  s->add_option("--sweep-unary", sweep, "Sweep all unary algebras with |A| <= N")
      ->check(CLI::Range(1, 6));
  s->callback([&] { action = [&] { return cmd_determinacy(g, algebra, relation, sweep); }; });

  s = sub("realize", "Represent a multi-algebra as a full covering quotient");
  s->add_option("--multialgebra", multi, "Multi-algebra file")->required();
  s->callback([&] { action = [&] { return cmd_realize(g, multi, g.output); }; });

  s = sub("iso", "Isomorphism test for multi-algebras");
  s->add_option("--lhs", lhs, "First structure")->required();
  s->add_option("--rhs", rhs, "Second structure")->required();
  s->callback([&] { action = [&] { return cmd_iso(g, lhs, rhs); }; });

  s = sub("represent", "Search for a tolerance quotient isomorphic to the target");
  s->add_option("--target", target, "Target multi-algebra")->required();
  s->callback([&] { action = [&] { return cmd_represent(g, target, SearchKind::tolerance); }; });

  s = sub("fc-represent", "Search for a full covering quotient isomorphic to the target");
  s->add_option("--target", target, "Target multi-algebra")->required();
  s->callback(
      [&] { action = [&] { return cmd_represent(g, target, SearchKind::full_covering); }; });

  s = sub("fourth-clique", "Derive a clique outside three overlapping blocks");
  add_relation(s, true);
  s->add_option("--blocks", blocks, "Three maximal-clique indices, comma separated");
  s->add_option("--elements", elements, "Three elements (names or indices), comma separated");
  s->callback([&] { action = [&] { return cmd_fourth_clique(g, relation, blocks, elements); }; });

  s = sub("gen", "Emit a built-in structure");
  s->add_option("what", what, "pow3-plus, example2, nondisjoint, principal-filters, random")
      ->required();
  s->add_option("--m", m, "Ground set size for nondisjoint and principal-filters");
  s->add_option("--size", size, "Universe size for random structures");
  s->add_option("--kind", kind, "algebra, multialgebra or relation (random)")
      ->default_str("algebra");
  s->add_option("--arities", arities, "Operation arities for random structures, e.g. 1,2");
  s->callback([&] {
    if (kind.empty()) {
      kind = "algebra";
    }
    action = [&] { return cmd_gen(g, what, m, size, kind, arities); };
  });

  s = sub("dot", "Graphviz rendering of a relation");
  add_relation(s, true);
  s->add_option("--covering", covering, "Covering whose blocks are colored");
  s->callback([&] { action = [&] { return cmd_dot(g, relation, covering); }; });

  CommandOutcome outcome;
  std::vector<char const*> argv{"tolquot"};
  for (auto const& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    outcome.exit_code = code == 0 ? exit_ok : exit_usage;
    outcome.out = out.str();
    outcome.err = err.str();
    return outcome;
  }

  bool const is_dot_command = app.got_subcommand("dot");
  try {
    Result r = action();
    std::string payload;
    if (g.format == "json") {
      payload = r.data.dump(2) + "\n";
    } else if (g.format == "dot" || is_dot_command) {
      if (r.dot.empty()) {
        throw UsageError("--format dot is only available for relation-valued commands");
      }
      payload = r.dot;
    } else {
      payload = r.text;
    }
    bool const to_file = !g.output.empty() && !app.got_subcommand("realize");
    if (to_file) {
      write_text(g.output, payload);
    } else {
      outcome.out = payload;
    }
    outcome.exit_code = r.code;
  } catch (UsageError const& e) {
    outcome.exit_code = exit_usage;
    outcome.err = std::string("error: ") + e.what() + "\n";
  } catch (ResourceExceeded const& e) {
    outcome.exit_code = exit_resource;
    outcome.err = std::string("resource exceeded: ") + e.what() + "\n";
    if (auto const* sb = dynamic_cast<SearchBudgetExceeded const*>(&e)) {
      outcome.err += stats_text(sb->progress());
    }
  } catch (Error const& e) {
    outcome.exit_code = exit_input;
    outcome.err = std::string("error: ") + e.what() + "\n";
  } catch (std::filesystem::filesystem_error const& e) {
    outcome.exit_code = exit_input;
    outcome.err = std::string("error: ") + e.what() + "\n";
  } catch (json::exception const& e) {
    outcome.exit_code = exit_input;
    outcome.err = std::string("error: ") + e.what() + "\n";
  }
  return outcome;
}

}  // namespace tolquot::cli
