#include "cwb/cformula.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

void collect_free(const CTerm& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.kind == CTerm::Kind::Var && !bound.count(t.var)) out.insert(t.var);
  for (const auto& a : t.args) collect_free(a, bound, out);
}

void collect_free(const CFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.kind == CFormula::Kind::Norm) collect_free(f.term, bound, out);
  if (f.kind == CFormula::Kind::Sup || f.kind == CFormula::Kind::Inf) {
    const bool fresh = bound.insert(f.var).second;
    collect_free(f.subs[0], bound, out);
    if (fresh) bound.erase(f.var);
    return;
  }
  for (const auto& s : f.subs) collect_free(s, bound, out);
}

void add_moduli(std::map<std::string, double>& into, const std::map<std::string, double>& from, double factor = 1.0) {
  for (const auto& [v, l] : from) into[v] = up(into[v] + up(l * factor));
}

void max_moduli(std::map<std::string, double>& into, const std::map<std::string, double>& from) {
  for (const auto& [v, l] : from) into[v] = std::max(into[v], l);
}

std::string number(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::logic_error("number formatting failed");
  return std::string(buf.data(), end);
}

std::string join(const std::vector<CTerm>& ts) {
  std::string out;
  for (const auto& t : ts) out += " " + to_string(t);
  return out;
}

}  // namespace

CFormula CFormula::constant(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw PreconditionError("formula constants lie in [0, 1]");
  return CFormula{Kind::Const, c, {}, {}, {}, Sort::Ball};
}

CFormula CFormula::max(std::vector<CFormula> a) {
  if (a.empty()) throw PreconditionError("max needs an argument");
  return nary(Kind::Max, std::move(a));
}

CFormula CFormula::min(std::vector<CFormula> a) {
  if (a.empty()) throw PreconditionError("min needs an argument");
  return nary(Kind::Min, std::move(a));
}

CFormula CFormula::scale(double r, CFormula a) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("scalars are finite and >= 0");
  CFormula out = nary(Kind::Scale, {std::move(a)});
  out.value = r;
  return out;
}

std::vector<std::string> CFormula::free_variables() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return {out.begin(), out.end()};
}

int CFormula::quantifier_depth() const {
  int d = 0;
  for (const auto& s : subs) d = std::max(d, s.quantifier_depth());
  return d + (kind == Kind::Sup || kind == Kind::Inf ? 1 : 0);
}

TermBounds term_bounds(const CTerm& t) {
  using K = CTerm::Kind;
  TermBounds out;
  switch (t.kind) {
    case K::Const: out.norm_bound = up(std::abs(t.value)); break;
    case K::Var:
      out.norm_bound = 1.0;
      out.modulus[t.var] = 1.0;
      break;
    case K::Add:
    case K::Sub:
      for (const auto& a : t.args) {
        const auto b = term_bounds(a);
        out.norm_bound = up(out.norm_bound + b.norm_bound);
        add_moduli(out.modulus, b.modulus);
      }
      break;
    case K::Neg:
    case K::Star: out = term_bounds(t.args[0]); break;
    case K::Mul: {
      std::vector<TermBounds> parts;
      for (const auto& a : t.args) parts.push_back(term_bounds(a));
      out.norm_bound = 1.0;
      for (const auto& p : parts) out.norm_bound = up(out.norm_bound * p.norm_bound);
      // ||prod a_i - prod a_i'|| <= sum_i L_i prod_{j != i} B_j.
      for (std::size_t i = 0; i < parts.size(); ++i) {
        double others = 1.0;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          if (j != i) others = up(others * parts[j].norm_bound);
        }
        add_moduli(out.modulus, parts[i].modulus, others);
      }
      break;
    }
  }
  return out;
}

FormulaBounds formula_bounds(const CFormula& f) {
  using K = CFormula::Kind;
  FormulaBounds out;
  switch (f.kind) {
    case K::Const: out.upper = f.value; break;
    case K::Norm: {
      auto b = term_bounds(f.term);
      out.upper = b.norm_bound;
      out.modulus = std::move(b.modulus);
      break;
    }
    case K::Add:
    case K::Monus:
    case K::AbsDiff: {
      const auto a = formula_bounds(f.subs[0]);
      const auto b = formula_bounds(f.subs[1]);
      out.upper = f.kind == K::Add ? up(a.upper + b.upper) : f.kind == K::Monus ? a.upper : std::max(a.upper, b.upper);
      out.modulus = a.modulus;
      add_moduli(out.modulus, b.modulus);
      break;
    }
    case K::Max:
    case K::Min: {
      out.upper = f.kind == K::Max ? 0.0 : std::numeric_limits<double>::infinity();
      for (const auto& s : f.subs) {
        const auto b = formula_bounds(s);
        out.upper = f.kind == K::Max ? std::max(out.upper, b.upper) : std::min(out.upper, b.upper);
        max_moduli(out.modulus, b.modulus);
      }
      break;
    }
    case K::Scale: {
      const auto b = formula_bounds(f.subs[0]);
      out.upper = up(f.value * b.upper);
      add_moduli(out.modulus, b.modulus, f.value);
      break;
    }
    case K::Sup:
    case K::Inf:
      out = formula_bounds(f.subs[0]);
      out.modulus.erase(f.var);
      break;
  }
  return out;
}

std::string to_string(Sort s) {
  switch (s) {
    case Sort::Ball: return ":ball";
    case Sort::SelfAdjoint: return ":sa";
    case Sort::Positive: return ":pos";
    case Sort::Projection: return ":proj";
  }
  return ":?";
}

std::string to_string(const CTerm& t) {
  using K = CTerm::Kind;
  switch (t.kind) {
    case K::Const:
      if (t.value.imag() == 0.0) return number(t.value.real());
      if (t.value == Complex(0.0, 1.0)) return "i";
      return "(c " + number(t.value.real()) + " " + number(t.value.imag()) + ")";
    case K::Var: return t.var;
    case K::Add: return "(+" + join(t.args) + ")";
    case K::Sub: return "(-" + join(t.args) + ")";
    case K::Neg: return "(-" + join(t.args) + ")";
    case K::Mul: return "(*" + join(t.args) + ")";
    case K::Star: return "(star " + to_string(t.args[0]) + ")";
  }
  throw std::logic_error("bad term kind");
}

std::string to_string(const CFormula& f) {
  using K = CFormula::Kind;
  auto subs = [&] {
    std::string out;
    for (const auto& s : f.subs) out += " " + to_string(s);
    return out;
  };
  switch (f.kind) {
    case K::Const: return number(f.value);
    case K::Norm: return "(norm " + to_string(f.term) + ")";
    case K::Add: return "(+" + subs() + ")";
    case K::Monus: return "(-." + subs() + ")";
    case K::Max: return "(max" + subs() + ")";
    case K::Min: return "(min" + subs() + ")";
    case K::Scale: return "(* " + number(f.value) + subs() + ")";
    case K::AbsDiff: return "(absdiff" + subs() + ")";
    case K::Sup: return "(sup " + f.var + " " + to_string(f.sort) + subs() + ")";
    case K::Inf: return "(inf " + f.var + " " + to_string(f.sort) + subs() + ")";
  }
  throw std::logic_error("bad formula kind");
}

// --- translation ------------------------------------------------------------

namespace {

CTerm translate_term(const FoTerm& t) {
  using K = FoTerm::Kind;
  switch (t.kind) {
    case K::Var: return CTerm::variable(t.var);
    case K::Zero: return CTerm::constant(0.0);
    case K::One: return CTerm::constant(1.0);
    case K::Meet: return CTerm::mul({translate_term(t.args[0]), translate_term(t.args[1])});
    case K::Join: {
      CTerm a = translate_term(t.args[0]);
      CTerm b = translate_term(t.args[1]);
      return CTerm::sub(CTerm::add({a, b}), CTerm::mul({a, b}));
    }
    case K::Complement: return CTerm::sub(CTerm::constant(1.0), translate_term(t.args[0]));
  }
  throw std::logic_error("bad term kind");
}

CFormula negate(CFormula f) { return CFormula::monus(CFormula::constant(1.0), std::move(f)); }

}  // namespace

CFormula translate_fo(const FoFormula& f) {
  using K = FoFormula::Kind;
  switch (f.kind) {
    case K::Eq: return CFormula::norm(CTerm::sub(translate_term(f.terms[0]), translate_term(f.terms[1])));
    case K::Leq: {
      CTerm a = translate_term(f.terms[0]);
      return CFormula::norm(CTerm::sub(CTerm::mul({a, translate_term(f.terms[1])}), a));
    }
    case K::Not: return negate(translate_fo(f.subs[0]));
    case K::And: return CFormula::max({translate_fo(f.subs[0]), translate_fo(f.subs[1])});
    case K::Or: return CFormula::min({translate_fo(f.subs[0]), translate_fo(f.subs[1])});
    case K::Implies: return CFormula::min({negate(translate_fo(f.subs[0])), translate_fo(f.subs[1])});
    case K::Forall: return CFormula::sup(f.var, Sort::Projection, translate_fo(f.subs[0]));
    case K::Exists: return CFormula::inf(f.var, Sort::Projection, translate_fo(f.subs[0]));
  }
  throw std::logic_error("bad formula kind");
}

CFormula psi_formula(const std::string& p) {
  const CTerm x = CTerm::variable(p);
  const CTerm y = CTerm::variable(p == "y" ? "q" : "y");
  const CTerm yys = CTerm::mul({y, CTerm::star(y)});
  const CTerm ysy = CTerm::mul({CTerm::star(y), y});
  CFormula head = CFormula::add(CFormula::norm(CTerm::sub(x, CTerm::star(x))),
                                CFormula::norm(CTerm::sub(x, CTerm::mul({x, x}))));
  CFormula body = CFormula::add(
      CFormula::add(CFormula::norm(CTerm::sub(yys, x)), CFormula::norm(CTerm::sub(CTerm::mul({ysy, x}), ysy))),
      CFormula::monus(CFormula::constant(1.0), CFormula::norm(CTerm::sub(ysy, x))));
  return CFormula::add(std::move(head), CFormula::inf(y.var, Sort::Projection, std::move(body)));
}

// --- generation -------------------------------------------------------------

namespace {

class CFormulaGenerator {
public:
  explicit CFormulaGenerator(std::uint64_t seed) : rng_(seed) {}

  CFormula formula(int depth, std::vector<std::string>& scope, int size) {
    const bool can_quantify = depth > 0;
    const std::size_t choice = pick(can_quantify ? 10 : 8);
    if (size <= 0 || (choice < 2 && !scope.empty())) {
      if (scope.empty() || coin(0.1)) return CFormula::constant(kFormulaConsts[pick(kFormulaConsts.size())]);
      return CFormula::norm(term(scope, 3));
    }
    switch (choice) {
      case 0:
      case 1:
      case 2: return CFormula::add(formula(depth, scope, size - 1), formula(depth, scope, size - 1));
      case 3: return CFormula::monus(formula(depth, scope, size - 1), formula(depth, scope, size - 1));
      case 4: return CFormula::max({formula(depth, scope, size - 1), formula(depth, scope, size - 1)});
      case 5: return CFormula::min({formula(depth, scope, size - 2), formula(depth, scope, size - 2),
                                    formula(depth, scope, size - 2)});
      case 6: return CFormula::scale(kScalars[pick(kScalars.size())], formula(depth, scope, size - 1));
      case 7: return CFormula::absdiff(formula(depth, scope, size - 1), formula(depth, scope, size - 1));
      default: {
        const std::string v = kNames[scope.size() % kNames.size()] + std::string(scope.size() >= kNames.size() ? "1" : "");
        const Sort s = static_cast<Sort>(pick(4));
        scope.push_back(v);
        CFormula body = formula(depth - 1, scope, size - 1);
        scope.pop_back();
        return coin(0.5) ? CFormula::sup(v, s, std::move(body)) : CFormula::inf(v, s, std::move(body));
      }
    }
  }

private:
  static constexpr std::array<const char*, 4> kNames{"p", "q", "r", "s"};
  static constexpr std::array<double, 5> kFormulaConsts{0.0, 1.0, 0.5, 0.25, 0.125};
  static constexpr std::array<double, 4> kScalars{0.0, 0.5, 2.0, 3.0};

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  CTerm term(const std::vector<std::string>& scope, int size) {
    static const std::array<Complex, 6> kConsts{Complex(0), Complex(1), Complex(0, 1), Complex(-1), Complex(0.5),
                                                Complex(0.25, -0.75)};
    if (size <= 0 || coin(0.35)) {
      if (coin(0.75)) return CTerm::variable(scope[pick(scope.size())]);
      return CTerm::constant(kConsts[pick(kConsts.size())]);
    }
    switch (pick(5)) {
      case 0: return CTerm::add({term(scope, size - 1), term(scope, size - 1)});
      case 1: return CTerm::sub(term(scope, size - 1), term(scope, size - 1));
      case 2: return CTerm::neg(term(scope, size - 1));
      case 3: return CTerm::mul({term(scope, size - 1), term(scope, size - 1)});
      default: return CTerm::star(term(scope, size - 1));
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace

std::vector<CFormula> generate_cformulas(std::size_t count, int max_depth, std::uint64_t seed) {
  CFormulaGenerator gen(seed);
  std::vector<CFormula> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string> scope;
    out.push_back(gen.formula(max_depth, scope, 4));
  }
  return out;
}

}  // namespace cwb
