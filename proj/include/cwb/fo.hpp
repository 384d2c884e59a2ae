#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwb/boolalg.hpp"
#include "cwb/exec.hpp"

namespace cwb {

// Term over the Boolean algebra signature {0, 1, meet, join, complement}.
struct FoTerm {
  enum class Kind { Var, Zero, One, Meet, Join, Complement };

  Kind kind = Kind::Zero;
  std::string var;
  std::vector<FoTerm> args;

  static FoTerm variable(std::string name) { return FoTerm{Kind::Var, std::move(name), {}}; }
  static FoTerm zero() { return FoTerm{Kind::Zero, {}, {}}; }
  static FoTerm one() { return FoTerm{Kind::One, {}, {}}; }
  static FoTerm meet(FoTerm a, FoTerm b) { return FoTerm{Kind::Meet, {}, {std::move(a), std::move(b)}}; }
  static FoTerm join(FoTerm a, FoTerm b) { return FoTerm{Kind::Join, {}, {std::move(a), std::move(b)}}; }
  static FoTerm complement(FoTerm a) { return FoTerm{Kind::Complement, {}, {std::move(a)}}; }

  friend bool operator==(const FoTerm&, const FoTerm&) = default;
};

// First-order formula of Boolean algebras with = and <=.
struct FoFormula {
  enum class Kind { Eq, Leq, Not, And, Or, Implies, Forall, Exists };

  Kind kind = Kind::Eq;
  std::vector<FoTerm> terms;    // Eq, Leq
  std::vector<FoFormula> subs;  // connectives, quantifier body
  std::string var;              // Forall, Exists

  static FoFormula eq(FoTerm a, FoTerm b) { return FoFormula{Kind::Eq, {std::move(a), std::move(b)}, {}, {}}; }
  static FoFormula leq(FoTerm a, FoTerm b) { return FoFormula{Kind::Leq, {std::move(a), std::move(b)}, {}, {}}; }
  static FoFormula negation(FoFormula a) { return FoFormula{Kind::Not, {}, {std::move(a)}, {}}; }
  static FoFormula conj(FoFormula a, FoFormula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static FoFormula disj(FoFormula a, FoFormula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
  static FoFormula implies(FoFormula a, FoFormula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
  static FoFormula forall(std::string v, FoFormula body) { return quant(Kind::Forall, std::move(v), std::move(body)); }
  static FoFormula exists(std::string v, FoFormula body) { return quant(Kind::Exists, std::move(v), std::move(body)); }

  int quantifier_rank() const;
  std::vector<std::string> free_variables() const;
  bool is_sentence() const { return free_variables().empty(); }

  friend bool operator==(const FoFormula&, const FoFormula&) = default;

private:
  static FoFormula binary(Kind k, FoFormula a, FoFormula b) {
    return FoFormula{k, {}, {std::move(a), std::move(b)}, {}};
  }
  static FoFormula quant(Kind k, std::string v, FoFormula body) {
    return FoFormula{k, {}, {std::move(body)}, std::move(v)};
  }
};

using FoAssignment = std::map<std::string, BAElement>;

// Evaluation budget: 2^(atom_count * quantifier_rank) element visits.
inline constexpr int kFoEvalBudgetLog2 = 24;

// Tarskian truth by exhaustive quantification over all elements of b.
// Throws ResourceError past the budget, PreconditionError on unassigned
// free variables.
bool fo_eval(const FoFormula& phi, const FiniteBoolAlg& b, const FoAssignment& assignment = {});

// Evaluates every sentence of a corpus in b. The parallel kernel splits the
// corpus across threads; the result is identical to the serial reference.
std::vector<bool> fo_eval_corpus(const std::vector<FoFormula>& sentences, const FiniteBoolAlg& b,
                                 Exec exec = Exec::Parallel);

// Deterministic seeded corpus of sentences of quantifier rank <= max_rank.
std::vector<FoFormula> generate_sentences(std::size_t count, int max_rank, std::uint64_t seed);

std::string to_string(const FoTerm& t);
std::string to_string(const FoFormula& phi);

}  // namespace cwb
