#include "cwb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cwb/batheory.hpp"
#include "cwb/boolalg.hpp"
#include "cwb/ceval.hpp"
#include "cwb/cformula.hpp"
#include "cwb/cstar.hpp"
#include "cwb/efgames.hpp"
#include "cwb/errors.hpp"
#include "cwb/fo.hpp"
#include "cwb/ordinal.hpp"
#include "cwb/parse.hpp"
#include "cwb/saturation.hpp"

namespace cwb::cli {

namespace {

using json = nlohmann::ordered_json;

struct Doc {
  std::string verb;
  json inputs = json::object();
  json body = json::object();  // verdict/value/certificate/cross_checks/notes
  int code = kExitOk;
};

// Budget / status failures that still carry a partial certificate.
struct ResourceWithCertificate : ResourceError {
  ResourceWithCertificate(const std::string& what, json cert) : ResourceError(what), certificate(std::move(cert)) {}
  json certificate;
};

json certificate_json(const EvalCertificate& c) {
  return json{{"lower", c.lower}, {"upper", c.upper}, {"width", c.width()}, {"grid_depth", c.grid_depth}};
}

json element_list(const std::vector<CElement>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(format_element(x));
  return out;
}

json members_json(std::uint64_t mask, std::size_t points) {
  json out = json::array();
  for (std::size_t i = 0; i < points; ++i) {
    if (mask >> i & 1U) out.push_back(i);
  }
  return out;
}

std::string comparison_name(Comparison c) {
  switch (c) {
    case Comparison::Less: return "LT";
    case Comparison::Equal: return "EQ";
    case Comparison::Greater: return "GT";
  }
  return "?";
}

json invariant_json(const ErshovInvariant& inv) {
  json atoms = inv.atoms ? json(*inv.atoms) : json("omega");
  return json{{"triple", inv.to_string()}, {"level", inv.level}, {"atoms", atoms}, {"atomless", inv.atomless}};
}

// A natural written in decimal or as 0b<bits>.
std::uint64_t parse_mask(const std::string& s) {
  std::uint64_t v = 0;
  if (s.size() > 2 && s[0] == '0' && s[1] == 'b') {
    for (std::size_t i = 2; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw ParseError("expected a binary digit", i);
      if (i > 2 + 31) throw ParseError("mask too wide", i);
      v = v << 1 | static_cast<std::uint64_t>(s[i] - '0');
    }
    return v;
  }
  if (s.empty()) throw ParseError("expected a natural number", 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw ParseError("expected a decimal digit", i);
    v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    if (v > 0xffffffffULL) throw ParseError("mask too wide", i);
  }
  return v;
}

// Each Duplicator win below the verdict's rank is implied by equivalence; a
// Spoiler win refutes it. Skipped entries explain why no oracle applies.
json ordinal_cross_checks(const Ordinal& a, const Ordinal& b, bool verdict, int max_rank) {
  json out = json::array();
  for (int r = 1; r <= max_rank; ++r) {
    try {
      const bool wins = ef::ef_ordinals(a, b, r);
      out.push_back(json{{"oracle", "ef_ordinals"}, {"rank", r}, {"duplicator_wins", wins}, {"agrees", !verdict || wins}});
    } catch (const std::exception& e) {
      out.push_back(json{{"oracle", "ef_ordinals"}, {"rank", r}, {"skipped", e.what()}});
      break;
    }
  }
  return out;
}

// --- verbs ------------------------------------------------------------------

struct Options {
  // ord-arith
  std::string op, a, b;
  // ord-eq / calkin-eq
  int ef_rank = 3;
  // ef
  std::string ef_kind;
  int rank = 2;
  // ba-*
  std::string d1, d2;
  std::size_t enumerate = 10;
  std::size_t corpus = 200;
  // stone
  std::size_t atoms = 0;
  std::vector<std::string> generators;
  std::string map;
  std::size_t codomain = 0;
  // translate / ceval
  std::string formula;
  std::size_t points = 0;
  std::vector<std::string> params;
  double tol = 1e-6;
  bool serial = false;
  std::uint64_t budget = 0;
  // jspec / fmember / code
  std::vector<std::string> elements;
  std::string lambda;
  std::uint64_t m = 0;
  bool unpadded = false;
  bool reconstruct = false;
  // interpolate
  std::vector<std::string> below, above;
  std::size_t finite_atoms = 0;
  // realize
  std::string instance;
  std::vector<std::string> conditions;

  std::uint64_t seed = kDefaultSeed;
};

Exec exec_of(const Options& o) { return o.serial ? Exec::Serial : Exec::Parallel; }

void verb_ord_arith(const Options& o, Doc& d) {
  d.inputs = json{{"op", o.op}, {"a", o.a}};
  if (o.op != "split") d.inputs["b"] = o.b;
  const Ordinal a = parse_ordinal(o.a);
  if (o.op == "split") {
    if (!o.b.empty()) throw PreconditionError("split takes one ordinal");
    const auto s = split_mod_omega_omega(a);
    d.body["value"] = json{{"quotient", s.quotient.to_string()}, {"residue", s.residue.to_string()}};
    return;
  }
  if (o.b.empty()) throw PreconditionError("'" + o.op + "' takes two ordinals");
  const Ordinal b = parse_ordinal(o.b);
  if (o.op == "cmp") {
    d.body["value"] = comparison_name(compare(a, b));
  } else if (o.op == "add") {
    d.body["value"] = add(a, b).to_string();
  } else if (o.op == "mul") {
    d.body["value"] = mul(a, b).to_string();
  } else if (o.op == "pow") {
    d.body["value"] = pow(a, b).to_string();
  } else if (o.op == "sub") {
    if (compare(a, b) == Comparison::Greater) throw PreconditionError("sub requires a <= b (computes x with a + x = b)");
    d.body["value"] = left_subtract(a, b).to_string();
  } else {
    throw PreconditionError("unknown op '" + o.op + "' (add, mul, pow, sub, cmp, split)");
  }
}

void verb_ordinal_equiv(const Options& o, Doc& d, bool calkin) {
  d.inputs = json{{"a", o.a}, {"b", o.b}};
  if (o.ef_rank < 0 || o.ef_rank > ef::kMaxOrdinalRank) throw PreconditionError("--ef-rank must be in 0..4");
  const Ordinal a = parse_ordinal(o.a);
  const Ordinal b = parse_ordinal(o.b);
  const bool verdict = calkin ? calkin_equiv(a, b) : ordinal_equiv(a, b);
  const auto sa = split_mod_omega_omega(a);
  const auto sb = split_mod_omega_omega(b);
  d.body["verdict"] = verdict;
  d.body["value"] = json{
      {"a", json{{"normal_form", a.to_string()}, {"quotient", sa.quotient.to_string()}, {"residue", sa.residue.to_string()}}},
      {"b", json{{"normal_form", b.to_string()}, {"quotient", sb.quotient.to_string()}, {"residue", sb.residue.to_string()}}}};
  d.body["cross_checks"] = ordinal_cross_checks(a, b, verdict, o.ef_rank);
  if (calkin) {
    d.body["notes"] = json::array({"projection posets compared through the interpreted ordinal"});
  }
}

void verb_ef(const Options& o, Doc& d) {
  d.inputs = json{{"kind", o.ef_kind}, {"a", o.a}, {"b", o.b}, {"rank", o.rank}};
  if (o.rank < 0) throw PreconditionError("rank must be >= 0");
  bool wins = false;
  if (o.ef_kind == "orders") {
    wins = ef::ef_finite_orders(parse_mask(o.a), parse_mask(o.b), o.rank);
  } else if (o.ef_kind == "ordinals") {
    wins = ef::ef_ordinals(parse_ordinal(o.a), parse_ordinal(o.b), o.rank);
  } else if (o.ef_kind == "bas") {
    wins = ef::ef_finite_bas(FiniteBoolAlg(parse_mask(o.a)), FiniteBoolAlg(parse_mask(o.b)), o.rank);
  } else {
    throw PreconditionError("unknown game kind '" + o.ef_kind + "' (orders, ordinals, bas)");
  }
  d.body["verdict"] = wins;
  d.body["value"] = wins ? "duplicator" : "spoiler";
}

void verb_ba_invariants(const Options& o, Doc& d) {
  d.inputs = json{{"descriptor", o.d1}};
  const BADescriptor desc = parse_descriptor(o.d1);
  json chain = json::array();
  for (const auto& c : derivative_chain(desc)) chain.push_back(c.to_string());
  d.body["value"] = json{{"descriptor", desc.to_string()},
                         {"invariant", invariant_json(ershov_invariants(desc))},
                         {"derivative_chain", chain}};
}

void verb_ba_eq(const Options& o, Doc& d) {
  d.inputs = json{{"a", o.d1}, {"b", o.d2}};
  const BADescriptor a = parse_descriptor(o.d1);
  const BADescriptor b = parse_descriptor(o.d2);
  const bool verdict = ba_equiv(a, b);
  d.body["verdict"] = verdict;
  d.body["value"] = json{{"a", json{{"descriptor", a.to_string()}, {"invariant", invariant_json(ershov_invariants(a))}}},
                         {"b", json{{"descriptor", b.to_string()}, {"invariant", invariant_json(ershov_invariants(b))}}},
                         {"cstar_equiv", cstar_equiv(a, b)}};

  json checks = json::array();
  using K = BADescriptor::Kind;
  if (a.kind == K::Finite && b.kind == K::Finite && a.atoms <= ef::kMaxBoolAtoms && b.atoms <= ef::kMaxBoolAtoms) {
    const FiniteBoolAlg pa(a.atoms), pb(b.atoms);
    for (int r = 1; r <= ef::kMaxBoolRank; ++r) {
      const bool wins = ef::ef_finite_bas(pa, pb, r);
      checks.push_back(json{{"oracle", "ef_finite_bas"}, {"rank", r}, {"duplicator_wins", wins}, {"agrees", !verdict || wins}});
    }
    const auto corpus = generate_sentences(o.corpus, 2, o.seed);
    const auto va = fo_eval_corpus(corpus, pa);
    const auto vb = fo_eval_corpus(corpus, pb);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < va.size(); ++i) differ += va[i] != vb[i];
    checks.push_back(json{{"oracle", "fo_eval_corpus"},
                          {"sentences", corpus.size()},
                          {"seed", o.seed},
                          {"disagreements", differ},
                          {"agrees", !verdict || differ == 0}});
  }
  if (!checks.empty()) d.body["cross_checks"] = checks;

  if (const auto note = equivalence_conflict(a, b)) {
    d.body["notes"] = json::array({json{{"kind", "conflict"},
                                        {"cites", note->cites},
                                        {"hypothesis", note->hypothesis},
                                        {"predicted", note->predicted},
                                        {"computed", note->computed}}});
  }
}

void verb_ba_enumerate(const Options& o, Doc& d) {
  d.inputs = json{{"count", o.enumerate}};
  json out = json::array();
  for (const auto& t : enumerate_theories(o.enumerate)) out.push_back(t.to_string());
  d.body["value"] = out;
}

void verb_stone(const Options& o, Doc& d) {
  d.inputs = json{{"atoms", o.atoms}};
  if (o.atoms > FiniteBoolAlg::kMaxAtoms) throw PreconditionError("at most 24 atoms");
  const FiniteBoolAlg b(o.atoms);
  const FiniteSpace s = stone_space(b);
  json value{{"points", s.points},
             {"algebra_round_trip", isomorphic(b, clopen_algebra(s))},
             {"space_round_trip", stone_space(clopen_algebra(s)) == s}};
  if (!o.generators.empty()) {
    d.inputs["generators"] = o.generators;
    std::vector<BAElement> gens;
    for (const auto& g : o.generators) {
      const auto v = parse_mask(g);
      if (!b.contains(static_cast<BAElement>(v)) || v > 0xffffffffULL) throw PreconditionError("generator " + g + " is not an element");
      gens.push_back(static_cast<BAElement>(v));
    }
    const Subalgebra sub = generate_subalgebra(b, gens);
    json atoms = json::array();
    for (auto e : sub.atom_images) atoms.push_back(members_json(e, o.atoms));
    value["subalgebra"] = json{{"atoms", sub.algebra.atom_count()},
                               {"atom_images", atoms},
                               {"stone_points", stone_space(sub).points}};
  }
  if (!o.map.empty()) {
    d.inputs["map"] = o.map;
    d.inputs["codomain"] = o.codomain;
    SpaceMap f{FiniteSpace{o.atoms}, FiniteSpace{o.codomain}, {}};
    std::stringstream ss(o.map);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
      const auto y = parse_mask(item);
      if (y >= o.codomain) throw PreconditionError("map image " + item + " outside the codomain");
      f.image.push_back(y);
    }
    if (f.image.size() != o.atoms) throw PreconditionError("map needs one image per point");
    const BAHomomorphism h = dual_morphism(f);
    json pre = json::array();
    for (std::size_t y = 0; y < o.codomain; ++y) pre.push_back(members_json(h.apply(BAElement{1} << y), o.atoms));
    value["dual_morphism"] = json{{"preimages_of_points", pre},
                                  {"preserves_operations", h.preserves_operations()},
                                  {"injective", h.is_injective()},
                                  {"surjective", h.is_surjective()}};
  }
  d.body["value"] = value;
}

void verb_translate(const Options& o, Doc& d) {
  d.inputs = json{{"formula", o.formula}};
  const FoFormula phi = parse_fo_formula(o.formula);
  const CFormula t = translate_fo(phi);
  d.body["value"] = to_string(t);
  if (o.points > 0) {
    d.inputs["points"] = o.points;
    d.inputs["tol"] = o.tol;
    const bool truth = fo_eval(phi, FiniteBoolAlg(o.points));
    const EvalCertificate c = ceval(t, CStarAlgebraFin{o.points}, {}, o.tol, exec_of(o));
    // True sentences translate to 0, false ones to at least 1.
    const bool agrees = truth ? c.upper <= o.tol : c.lower >= 1.0 - o.tol;
    d.body["certificate"] = certificate_json(c);
    d.body["cross_checks"] = json::array({json{{"oracle", "fo_eval"}, {"points", o.points}, {"fo_true", truth}, {"agrees", agrees}}});
  }
}

CAssignment parse_params(const std::vector<std::string>& params, std::vector<std::string>& names) {
  CAssignment out;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected name=element", 0);
    const std::string name = p.substr(0, eq);
    try {
      out[name] = parse_element(std::string_view(p).substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(std::string("in --param ") + name + ": " + e.what(), e.position() + eq + 1);
    }
    names.push_back(name);
  }
  return out;
}

void verb_ceval(const Options& o, Doc& d) {
  d.inputs = json{{"formula", o.formula}, {"points", o.points}, {"params", o.params}, {"tol", o.tol}};
  std::vector<std::string> names;
  const CAssignment params = parse_params(o.params, names);
  const CFormula phi = parse_cformula(o.formula, names);
  const auto bounds = formula_bounds(phi);
  try {
    const EvalCertificate c =
        ceval(phi, CStarAlgebraFin{o.points}, params, o.tol, exec_of(o), o.budget ? o.budget : kEvalNodeBudget);
    d.body["value"] = 0.5 * (c.lower + c.upper);
    d.body["certificate"] = certificate_json(c);
  } catch (const EvalBudgetError& e) {
    throw ResourceWithCertificate(e.what(), certificate_json(e.best()));
  }
  json modulus = json::object();
  for (const auto& [k, v] : bounds.modulus) modulus[k] = v;
  d.body["notes"] = json::array({json{{"upper_bound", bounds.upper}, {"lipschitz", modulus}}});
}

std::vector<CElement> parse_elements(const std::vector<std::string>& xs) {
  std::vector<CElement> out;
  for (const auto& x : xs) out.push_back(parse_element(x));
  if (out.empty()) throw PreconditionError("need at least one element");
  for (const auto& e : out) {
    if (e.size() != out[0].size()) throw PreconditionError("elements must have the same number of points");
  }
  return out;
}

void verb_jspec(const Options& o, Doc& d) {
  d.inputs = json{{"elements", o.elements}};
  d.body["value"] = element_list(joint_spectrum(parse_elements(o.elements)));
}

void verb_fmember(const Options& o, Doc& d) {
  d.inputs = json{{"elements", o.elements}, {"lambda", o.lambda}};
  const auto a = parse_elements(o.elements);
  const CElement lambda = parse_element(o.lambda);
  if (lambda.size() != a.size()) throw PreconditionError("lambda needs one coordinate per element");
  const auto rep = singularity_report(a, lambda);
  if (!rep.consistent()) throw std::logic_error("singularity tests disagree");
  d.body["verdict"] = rep.pointwise;
  d.body["value"] = json{{"F", spectrum_indicator(a, lambda)}};
  d.body["cross_checks"] = json::array(
      {json{{"oracle", "sum_not_invertible"}, {"value", rep.sum_not_invertible}, {"min_abs_sum", rep.min_abs_sum}, {"agrees", rep.sum_not_invertible == rep.pointwise}},
       json{{"oracle", "unsolvable"}, {"value", rep.unsolvable}, {"residual", rep.residual}, {"agrees", rep.unsolvable == rep.pointwise}}});
}

void verb_code(const Options& o, Doc& d) {
  d.inputs = json{{"f", o.formula}, {"m", o.m}, {"padding", o.unpadded ? "none" : "one-step"}};
  const CElement f = parse_element(o.formula);
  const GridPadding pad = o.unpadded ? GridPadding::None : GridPadding::OneStep;
  const auto codes = clopen_code(f, o.m, pad);
  json sets = json::array();
  for (const auto& c : codes) {
    if (c.members == 0) continue;
    sets.push_back(json{{"label", format_complex(c.label.value(c.m))}, {"members", members_json(c.members, f.size())}});
  }
  d.body["value"] = json{{"sets", sets}};
  if (o.reconstruct) {
    const CElement g = reconstruct(codes, f.size());
    d.body["value"]["reconstruction"] = format_element(g);
    d.body["certificate"] = json{{"error", norm(f - g)}, {"bound", 2.0 / static_cast<double>(o.m)}};
  }
}

void verb_interpolate(const Options& o, Doc& d) {
  d.inputs = json{{"below", o.below}, {"above", o.above}};
  if (o.finite_atoms == 0) {
    d.inputs["algebra"] = "atomless";
    std::vector<CylinderSet> y, z;
    for (const auto& s : o.below) y.push_back(parse_cylinder(s));
    for (const auto& s : o.above) z.push_back(parse_cylinder(s));
    const auto c = interpolate_chain(y, z, PresentedAtomlessBA{});
    d.body["verdict"] = "Found";
    d.body["value"] = c.to_string();
    return;
  }
  d.inputs["algebra"] = "finite(" + std::to_string(o.finite_atoms) + ")";
  if (o.finite_atoms > FiniteBoolAlg::kMaxAtoms) throw PreconditionError("at most 24 atoms");
  const FiniteBoolAlg b(o.finite_atoms);
  auto read = [&](const std::vector<std::string>& xs) {
    std::vector<BAElement> out;
    for (const auto& s : xs) {
      const auto v = parse_mask(s);
      if (!b.contains(static_cast<BAElement>(v))) throw PreconditionError(s + " is not an element");
      out.push_back(static_cast<BAElement>(v));
    }
    return out;
  };
  const auto c = interpolate_chain(read(o.below), read(o.above), b);
  if (!c) {
    d.body["verdict"] = "NotFound";
    d.code = kExitNegative;
    return;
  }
  d.body["verdict"] = "Found";
  d.body["value"] = members_json(*c, o.finite_atoms);
}

void verb_realize(const Options& o, Doc& d) {
  d.inputs = json{{"points", o.points}, {"tol", o.tol}};
  std::vector<TypeCondition> conds;
  if (!o.instance.empty()) {
    if (!o.conditions.empty()) throw PreconditionError("use either --instance or --cond");
    d.inputs["instance"] = o.instance;
    if (o.instance == "orth") {
      conds = orthogonality_type(o.points);
    } else if (o.instance == "rickart") {
      conds = rickart_type(o.points);
    } else {
      throw PreconditionError("unknown instance '" + o.instance + "' (orth, rickart)");
    }
  } else {
    d.inputs["conditions"] = o.conditions;
    for (const auto& c : o.conditions) conds.push_back(parse_type_condition(c, o.points));
  }
  const auto r = realize_type(conds, CStarAlgebraFin{o.points}, o.tol, exec_of(o), o.budget ? o.budget : kRealizeBoxBudget);
  switch (r.status) {
    case RealizeResult::Status::Realized:
      d.body["verdict"] = "Realized";
      d.body["value"] = element_list(r.assignment);
      d.body["certificate"] = json{{"violation", r.violation}, {"certified_violation", r.certified_violation}, {"boxes", r.boxes}};
      return;
    case RealizeResult::Status::Unsatisfiable:
      d.body["verdict"] = "Unsatisfiable";
      d.body["certificate"] = json{{"epsilon", r.epsilon},
                                   {"delta", r.delta},
                                   {"lower_bound", r.lower_bound},
                                   {"upper_bound", r.upper_bound},
                                   {"boxes", r.boxes}};
      d.code = kExitNegative;
      return;
    case RealizeResult::Status::Inconclusive:
      throw ResourceWithCertificate("search budget exhausted before a verdict",
                                    json{{"lower_bound", r.lower_bound}, {"upper_bound", r.upper_bound}, {"boxes", r.boxes}});
  }
}

void verb_orth(const Options& o, Doc& d) {
  d.inputs = json{{"points", o.points}};
  const auto fam = max_orthogonal_family(CStarAlgebraFin{o.points});
  d.body["value"] = json{{"size", fam.size}, {"witness", element_list(fam.witness)}};
  d.body["cross_checks"] = json::array({json{{"oracle", "is_orthogonal_family"}, {"agrees", is_orthogonal_family(fam.witness)}}});
}

// --- rendering --------------------------------------------------------------

void render_text(const json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        os << pad << k << ":\n";
        render_text(v, os, indent + 2);
      } else {
        os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !v.empty()) {
        os << pad << "-\n";
        render_text(v, os, indent + 2);
      } else {
        os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

json assemble(const Doc& d) {
  json out{{"verb", d.verb}, {"inputs", d.inputs}};
  for (const auto& [k, v] : d.body.items()) out[k] = v;
  return out;
}

json error_doc(const Doc& d, const std::string& kind, const std::string& message, std::optional<std::size_t> position = {}) {
  json err{{"kind", kind}, {"message", message}};
  if (position) err["position"] = *position;
  return json{{"verb", d.verb}, {"inputs", d.inputs}, {"error", err}};
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"Workbench for elementary equivalence of Boolean algebras, ordinals and C(X)", "cwb"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  bool as_json = false;
  std::string out_file;
  app.add_flag("--json", as_json, "Emit JSON");
  app.add_option("--seed", o.seed, "Seed for randomized corpora")->capture_default_str();
  app.add_option("--out", out_file, "Write output to a file instead of stdout");

  auto* ord_arith = app.add_subcommand("ord-arith", "Ordinal arithmetic: add, mul, pow, sub, cmp, split");
  ord_arith->add_option("op", o.op)->required();
  ord_arith->add_option("a", o.a)->required();
  ord_arith->add_option("b", o.b);

  auto* ord_eq = app.add_subcommand("ord-eq", "Elementary equivalence of ordinals as linear orders");
  auto* calkin_eq = app.add_subcommand("calkin-eq", "Equivalence of generalized Calkin projection posets");
  for (auto* sc : {ord_eq, calkin_eq}) {
    sc->add_option("a", o.a)->required();
    sc->add_option("b", o.b)->required();
    sc->add_option("--ef-rank", o.ef_rank, "Highest EF cross-check rank (0..4)")->capture_default_str();
  }

  auto* ef = app.add_subcommand("ef", "Ehrenfeucht-Fraisse game: orders M N, ordinals A B, or bas M N");
  ef->add_option("kind", o.ef_kind)->required();
  ef->add_option("a", o.a)->required();
  ef->add_option("b", o.b)->required();
  ef->add_option("--rank", o.rank)->capture_default_str();

  auto* ba_inv = app.add_subcommand("ba-invariants", "Tarski-Ershov invariants of a descriptor");
  ba_inv->add_option("descriptor", o.d1)->required();
  auto* ba_eq = app.add_subcommand("ba-eq", "Elementary equivalence of two Boolean algebras");
  ba_eq->add_option("a", o.d1)->required();
  ba_eq->add_option("b", o.d2)->required();
  ba_eq->add_option("--corpus", o.corpus, "FO cross-check corpus size")->capture_default_str();
  auto* ba_enum = app.add_subcommand("ba-enumerate", "First K complete theories");
  ba_enum->add_option("count", o.enumerate)->required();

  auto* stone = app.add_subcommand("stone", "Stone duality on P(n)");
  stone->add_option("atoms", o.atoms)->required();
  stone->add_option("--gen", o.generators, "Subalgebra generators (bitmasks)");
  stone->add_option("--map", o.map, "Point map X -> Y as comma-separated images");
  stone->add_option("--codomain", o.codomain, "Points of Y");

  auto* translate = app.add_subcommand("translate", "Translate an FO sentence to a continuous sentence");
  translate->add_option("formula", o.formula)->required();
  translate->add_option("--points", o.points, "Also compare both sides on C(X), |X| = points");
  translate->add_option("--tol", o.tol)->capture_default_str();
  translate->add_flag("--serial", o.serial);

  auto* ceval_cmd = app.add_subcommand("ceval", "Certified value of a continuous formula in C(X)");
  ceval_cmd->add_option("formula", o.formula)->required();
  ceval_cmd->add_option("--points", o.points)->required();
  ceval_cmd->add_option("--param", o.params, "name=element");
  ceval_cmd->add_option("--tol", o.tol)->capture_default_str();
  ceval_cmd->add_option("--budget", o.budget, "Node budget");
  ceval_cmd->add_flag("--serial", o.serial);

  auto* jspec = app.add_subcommand("jspec", "Joint spectrum of elements of C(X)");
  jspec->add_option("elements", o.elements)->required();
  auto* fmember = app.add_subcommand("fmember", "Is lambda in the joint spectrum? (F_n and three singularity tests)");
  fmember->add_option("elements", o.elements)->required();
  fmember->add_option("--lambda", o.lambda)->required();

  auto* code = app.add_subcommand("code", "Clopen coding of an element of C(X)");
  code->add_option("f", o.formula)->required();
  code->add_option("--m", o.m)->required();
  code->add_flag("--unpadded", o.unpadded, "Use the grid without the extra ring");
  code->add_flag("--reconstruct", o.reconstruct, "Rebuild f from the code and report the error");

  auto* interpolate = app.add_subcommand("interpolate", "Interpolate between chains Y < Z");
  interpolate->add_option("--below", o.below, "Ascending chain Y");
  interpolate->add_option("--above", o.above, "Descending chain Z");
  interpolate->add_option("--atoms", o.finite_atoms, "Work in P(n) (bitmask elements) instead of the atomless algebra");

  auto* realize = app.add_subcommand("realize", "Realize or refute a degree-1 type in C(X)");
  realize->add_option("--points", o.points)->required();
  realize->add_option("--instance", o.instance, "orth or rickart");
  realize->add_option("--cond", o.conditions, "norm(<poly>) in <target>");
  realize->add_option("--tol", o.tol)->capture_default_str();
  realize->add_option("--budget", o.budget, "Box budget");
  realize->add_flag("--serial", o.serial);

  auto* orth = app.add_subcommand("orth", "Largest orthogonal family of positive norm-one elements");
  orth->add_option("--points", o.points)->required();

  CommandResult result;
  const bool json_requested = std::find(args.begin(), args.end(), "--json") != args.end();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    result.out = subs.empty() ? app.help() : subs.front()->help();
    return result;
  } catch (const CLI::ParseError& e) {
    Doc d;
    const auto subs = app.get_subcommands();
    d.verb = subs.empty() ? "" : subs.front()->get_name();
    const json doc = error_doc(d, "usage", e.what());
    if (json_requested) {
      result.out = doc.dump(2) + "\n";
    } else {
      result.err = std::string("error: ") + e.what() + "\n";
    }
    result.exit_code = kExitInput;
    return result;
  }

  Doc d;
  d.verb = app.get_subcommands().front()->get_name();
  json doc;
  try {
    if (d.verb == "ord-arith") verb_ord_arith(o, d);
    else if (d.verb == "ord-eq") verb_ordinal_equiv(o, d, false);
    else if (d.verb == "calkin-eq") verb_ordinal_equiv(o, d, true);
    else if (d.verb == "ef") verb_ef(o, d);
    else if (d.verb == "ba-invariants") verb_ba_invariants(o, d);
    else if (d.verb == "ba-eq") verb_ba_eq(o, d);
    else if (d.verb == "ba-enumerate") verb_ba_enumerate(o, d);
    else if (d.verb == "stone") verb_stone(o, d);
    else if (d.verb == "translate") verb_translate(o, d);
    else if (d.verb == "ceval") verb_ceval(o, d);
    else if (d.verb == "jspec") verb_jspec(o, d);
    else if (d.verb == "fmember") verb_fmember(o, d);
    else if (d.verb == "code") verb_code(o, d);
    else if (d.verb == "interpolate") verb_interpolate(o, d);
    else if (d.verb == "realize") verb_realize(o, d);
    else if (d.verb == "orth") verb_orth(o, d);
    doc = assemble(d);
    result.exit_code = d.code;
  } catch (const ParseError& e) {
    doc = error_doc(d, "parse", e.what(), e.position());
    result.exit_code = kExitInput;
  } catch (const PreconditionError& e) {
    doc = error_doc(d, "precondition", e.what());
    result.exit_code = kExitInput;
  } catch (const ResourceWithCertificate& e) {
    doc = error_doc(d, "resource", e.what());
    doc["certificate"] = e.certificate;
    result.exit_code = kExitResource;
  } catch (const ResourceError& e) {
    doc = error_doc(d, "resource", e.what());
    result.exit_code = kExitResource;
  } catch (const std::overflow_error& e) {
    doc = error_doc(d, "overflow", e.what());
    result.exit_code = kExitResource;
  } catch (const std::exception& e) {
    doc = error_doc(d, "internal", e.what());
    result.exit_code = 1;
  }

  std::ostringstream text;
  if (as_json) {
    text << doc.dump(2) << "\n";
  } else {
    render_text(doc, text, 0);
  }
  if (doc.contains("error") && !as_json) {
    result.err = text.str();
  } else if (!out_file.empty()) {
    std::ofstream f(out_file);
    if (!f) {
      result.err = "error: cannot write " + out_file + "\n";
      result.exit_code = kExitInput;
      return result;
    }
    f << text.str();
  } else {
    result.out = text.str();
  }
  return result;
}

}  // namespace cwb::cli
