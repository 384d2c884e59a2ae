#include "cwb/fo.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

constexpr std::size_t kMaxSlots = 64;

struct Env {
  std::array<BAElement, kMaxSlots> slots{};
};

// Formula with variables resolved to environment slots.
struct Resolved {
  FoFormula::Kind kind;
  FoTerm::Kind term_kind;  // for term nodes
  bool is_term = false;
  int slot = -1;
  std::vector<Resolved> kids;
};

class Resolver {
public:
  explicit Resolver(const FoAssignment& free) {
    for (const auto& [name, value] : free) {
      scopes_[name].push_back(static_cast<int>(initial_.size()));
      initial_.push_back(value);
    }
  }

  const std::vector<BAElement>& initial() const { return initial_; }
  int depth() const { return static_cast<int>(initial_.size()) + bound_; }

  Resolved term(const FoTerm& t) {
    Resolved r{FoFormula::Kind::Eq, t.kind, true, -1, {}};
    if (t.kind == FoTerm::Kind::Var) {
      auto it = scopes_.find(t.var);
      if (it == scopes_.end() || it->second.empty()) {
        throw PreconditionError("unassigned free variable '" + t.var + "'");
      }
      r.slot = it->second.back();
    }
    for (const auto& a : t.args) r.kids.push_back(term(a));
    return r;
  }

  Resolved formula(const FoFormula& f) {
    Resolved r{f.kind, FoTerm::Kind::Zero, false, -1, {}};
    if (f.kind == FoFormula::Kind::Forall || f.kind == FoFormula::Kind::Exists) {
      r.slot = depth();
      if (static_cast<std::size_t>(r.slot) >= kMaxSlots) throw ResourceError("formula nests too many variables");
      scopes_[f.var].push_back(r.slot);
      ++bound_;
      r.kids.push_back(formula(f.subs[0]));
      --bound_;
      scopes_[f.var].pop_back();
      return r;
    }
    for (const auto& t : f.terms) r.kids.push_back(term(t));
    for (const auto& s : f.subs) r.kids.push_back(formula(s));
    return r;
  }

private:
  std::map<std::string, std::vector<int>> scopes_;
  std::vector<BAElement> initial_;
  int bound_ = 0;
};

BAElement eval_term(const Resolved& t, const FiniteBoolAlg& b, const Env& env) {
  switch (t.term_kind) {
    case FoTerm::Kind::Var: return env.slots[static_cast<std::size_t>(t.slot)];
    case FoTerm::Kind::Zero: return b.bottom();
    case FoTerm::Kind::One: return b.top();
    case FoTerm::Kind::Meet: return b.meet(eval_term(t.kids[0], b, env), eval_term(t.kids[1], b, env));
    case FoTerm::Kind::Join: return b.join(eval_term(t.kids[0], b, env), eval_term(t.kids[1], b, env));
    case FoTerm::Kind::Complement: return b.complement(eval_term(t.kids[0], b, env));
  }
  throw std::logic_error("bad term kind");
}

bool eval_formula(const Resolved& f, const FiniteBoolAlg& b, Env& env) {
  using K = FoFormula::Kind;
  switch (f.kind) {
    case K::Eq: return eval_term(f.kids[0], b, env) == eval_term(f.kids[1], b, env);
    case K::Leq: return b.leq(eval_term(f.kids[0], b, env), eval_term(f.kids[1], b, env));
    case K::Not: return !eval_formula(f.kids[0], b, env);
    case K::And: return eval_formula(f.kids[0], b, env) && eval_formula(f.kids[1], b, env);
    case K::Or: return eval_formula(f.kids[0], b, env) || eval_formula(f.kids[1], b, env);
    case K::Implies: return !eval_formula(f.kids[0], b, env) || eval_formula(f.kids[1], b, env);
    case K::Forall:
    case K::Exists: {
      const bool universal = f.kind == K::Forall;
      const auto slot = static_cast<std::size_t>(f.slot);
      for (std::uint64_t e = 0; e < b.size(); ++e) {
        env.slots[slot] = static_cast<BAElement>(e);
        if (eval_formula(f.kids[0], b, env) != universal) return !universal;
      }
      return universal;
    }
  }
  throw std::logic_error("bad formula kind");
}

void collect_free(const FoTerm& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.kind == FoTerm::Kind::Var && !bound.contains(t.var)) out.insert(t.var);
  for (const auto& a : t.args) collect_free(a, bound, out);
}

void collect_free(const FoFormula& f, std::multiset<std::string>& bound_ms, std::set<std::string>& out) {
  if (f.kind == FoFormula::Kind::Forall || f.kind == FoFormula::Kind::Exists) {
    auto it = bound_ms.insert(f.var);
    collect_free(f.subs[0], bound_ms, out);
    bound_ms.erase(it);
    return;
  }
  std::set<std::string> bound(bound_ms.begin(), bound_ms.end());
  for (const auto& t : f.terms) collect_free(t, bound, out);
  for (const auto& s : f.subs) collect_free(s, bound_ms, out);
}

void check_budget(const FoFormula& phi, const FiniteBoolAlg& b) {
  const auto cost = static_cast<long long>(b.atom_count()) * phi.quantifier_rank();
  if (cost > kFoEvalBudgetLog2) {
    throw ResourceError("fo_eval budget exceeded: 2^" + std::to_string(cost) + " > 2^" +
                        std::to_string(kFoEvalBudgetLog2));
  }
}

bool eval_sentence(const FoFormula& phi, const FiniteBoolAlg& b, const FoAssignment& assignment) {
  Resolver resolver(assignment);
  const Resolved r = resolver.formula(phi);
  Env env;
  std::copy(resolver.initial().begin(), resolver.initial().end(), env.slots.begin());
  return eval_formula(r, b, env);
}

// --- printing ---------------------------------------------------------------

bool is_quantifier(const FoFormula& f) {
  return f.kind == FoFormula::Kind::Forall || f.kind == FoFormula::Kind::Exists;
}

std::string operand(const FoFormula& f) {
  return is_quantifier(f) ? "(" + to_string(f) + ")" : to_string(f);
}

// --- generation -------------------------------------------------------------

class SentenceGenerator {
public:
  explicit SentenceGenerator(std::uint64_t seed) : rng_(seed) {}

  FoFormula sentence(int max_rank) {
    std::vector<std::string> scope;
    // Free-form random sentences rarely count atoms, so half the corpus
    // comes from the cell template below.
    if (max_rank >= 2 && coin(0.5)) return cell_sentence(max_rank, scope);
    // Sentences of rank 0 are legal but dull; most of the corpus quantifies.
    return formula(max_rank, scope, 4, /*force_quantifier=*/max_rank > 0 && coin(0.9));
  }

private:
  static constexpr std::array<const char*, 6> kNames{"x", "y", "z", "u", "v", "w"};

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  FoTerm term(const std::vector<std::string>& scope, int depth) {
    const int leaf_choices = static_cast<int>(scope.size()) + 2;
    if (depth == 0 || coin(0.45)) {
      const int c = pick(scope.empty() ? 2 : leaf_choices + static_cast<int>(scope.size()));
      if (c >= 2) return FoTerm::variable(scope[static_cast<std::size_t>(c - 2) % scope.size()]);
      return c == 0 ? FoTerm::zero() : FoTerm::one();
    }
    switch (pick(3)) {
      case 0: return FoTerm::meet(term(scope, depth - 1), term(scope, depth - 1));
      case 1: return FoTerm::join(term(scope, depth - 1), term(scope, depth - 1));
      default: return FoTerm::complement(term(scope, depth - 1));
    }
  }

  FoFormula atom(const std::vector<std::string>& scope) {
    auto a = term(scope, 2);
    auto b = term(scope, 2);
    return coin(0.6) ? FoFormula::eq(std::move(a), std::move(b)) : FoFormula::leq(std::move(a), std::move(b));
  }

  FoFormula formula(int rank, std::vector<std::string>& scope, int size, bool force_quantifier) {
    const bool can_quantify = rank > 0 && scope.size() < kNames.size();
    if (force_quantifier && can_quantify) return quantified(rank, scope, size);
    if (size <= 0) return atom(scope);
    const int c = pick(can_quantify ? 7 : 5);
    switch (c) {
      case 0:
      case 1: return atom(scope);
      case 2: return FoFormula::negation(formula(rank, scope, size - 1, false));
      case 3: return FoFormula::conj(formula(rank, scope, size / 2, false), formula(rank, scope, size / 2, false));
      case 4:
        return coin(0.5) ? FoFormula::disj(formula(rank, scope, size / 2, false), formula(rank, scope, size / 2, false))
                         : FoFormula::implies(formula(rank, scope, size / 2, false),
                                              formula(rank, scope, size / 2, false));
      default: return quantified(rank, scope, size);
    }
  }

  // Q x1 .. Q xk. Combination of constraints on the cells cut out by x1..xk:
  // empty, nonempty, at least two atoms (split by some z), at most one atom.
  FoFormula cell_sentence(int rank, std::vector<std::string>& scope) {
    const int k = 1 + pick(rank - 1);
    for (int i = 0; i < k; ++i) scope.push_back(kNames[scope.size()]);
    const std::string z = kNames[scope.size()];
    const bool conjunctive = coin(0.8);
    std::optional<FoFormula> body;
    for (unsigned pattern = 0; pattern < (1U << k); ++pattern) {
      const int kind = pick(5);
      if (kind == 0) continue;
      FoTerm cell;
      for (int i = 0; i < k; ++i) {
        FoTerm lit = FoTerm::variable(scope[static_cast<std::size_t>(i)]);
        if (pattern >> i & 1U) lit = FoTerm::complement(std::move(lit));
        cell = i == 0 ? std::move(lit) : FoTerm::meet(std::move(cell), std::move(lit));
      }
      FoFormula c;
      if (kind <= 2) {
        c = FoFormula::eq(std::move(cell), FoTerm::zero());
      } else {
        const FoTerm zv = FoTerm::variable(z);
        c = FoFormula::exists(
            z, FoFormula::conj(FoFormula::conj(FoFormula::negation(FoFormula::eq(zv, FoTerm::zero())),
                                               FoFormula::leq(zv, cell)),
                               FoFormula::negation(FoFormula::eq(zv, cell))));
      }
      if (kind == 2 || kind == 4) c = FoFormula::negation(std::move(c));
      if (!body) {
        body = std::move(c);
      } else {
        body = conjunctive ? FoFormula::conj(std::move(*body), std::move(c)) : FoFormula::disj(std::move(*body), std::move(c));
      }
    }
    if (!body) body = FoFormula::eq(FoTerm::variable(scope[0]), FoTerm::variable(scope[0]));
    FoFormula out = std::move(*body);
    for (int i = k; i-- > 0;) {
      std::string v = scope.back();
      scope.pop_back();
      out = coin(0.7) ? FoFormula::exists(std::move(v), std::move(out)) : FoFormula::forall(std::move(v), std::move(out));
    }
    return out;
  }

  FoFormula quantified(int rank, std::vector<std::string>& scope, int size) {
    std::string v = kNames[scope.size()];
    scope.push_back(v);
    FoFormula body = formula(rank - 1, scope, size - 1, rank > 1 && coin(0.5));
    scope.pop_back();
    return coin(0.5) ? FoFormula::forall(std::move(v), std::move(body))
                     : FoFormula::exists(std::move(v), std::move(body));
  }

  std::mt19937_64 rng_;
};

}  // namespace

int FoFormula::quantifier_rank() const {
  int r = 0;
  for (const auto& s : subs) r = std::max(r, s.quantifier_rank());
  return (kind == Kind::Forall || kind == Kind::Exists) ? r + 1 : r;
}

std::vector<std::string> FoFormula::free_variables() const {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_free(*this, bound, out);
  return {out.begin(), out.end()};
}

bool fo_eval(const FoFormula& phi, const FiniteBoolAlg& b, const FoAssignment& assignment) {
  check_budget(phi, b);
  for (const auto& [name, value] : assignment) {
    if (!b.contains(value)) throw PreconditionError("assignment for '" + name + "' is not an element");
  }
  return eval_sentence(phi, b, assignment);
}

std::vector<bool> fo_eval_corpus(const std::vector<FoFormula>& sentences, const FiniteBoolAlg& b, Exec exec) {
  for (const auto& s : sentences) check_budget(s, b);
  std::vector<char> out(sentences.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(sentences.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = eval_sentence(sentences[static_cast<std::size_t>(i)], b, {}) ? 1 : 0;
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = eval_sentence(sentences[static_cast<std::size_t>(i)], b, {}) ? 1 : 0;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<FoFormula> generate_sentences(std::size_t count, int max_rank, std::uint64_t seed) {
  SentenceGenerator gen(seed);
  std::vector<FoFormula> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.sentence(max_rank));
  return out;
}

std::string to_string(const FoTerm& t) {
  switch (t.kind) {
    case FoTerm::Kind::Var: return t.var;
    case FoTerm::Kind::Zero: return "0";
    case FoTerm::Kind::One: return "1";
    case FoTerm::Kind::Meet: return "(" + to_string(t.args[0]) + " /\\ " + to_string(t.args[1]) + ")";
    case FoTerm::Kind::Join: return "(" + to_string(t.args[0]) + " \\/ " + to_string(t.args[1]) + ")";
    case FoTerm::Kind::Complement: return "~" + to_string(t.args[0]);
  }
  throw std::logic_error("bad term kind");
}

std::string to_string(const FoFormula& f) {
  using K = FoFormula::Kind;
  switch (f.kind) {
    case K::Eq: return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case K::Leq: return to_string(f.terms[0]) + " <= " + to_string(f.terms[1]);
    case K::Not: return "!(" + to_string(f.subs[0]) + ")";
    case K::And: return "(" + operand(f.subs[0]) + " & " + operand(f.subs[1]) + ")";
    case K::Or: return "(" + operand(f.subs[0]) + " | " + operand(f.subs[1]) + ")";
    case K::Implies: return "(" + operand(f.subs[0]) + " -> " + operand(f.subs[1]) + ")";
    case K::Forall: return "forall " + f.var + ". " + to_string(f.subs[0]);
    case K::Exists: return "exists " + f.var + ". " + to_string(f.subs[0]);
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace cwb
