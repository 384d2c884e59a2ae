#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwb/cstar.hpp"
#include "cwb/fo.hpp"

namespace cwb {

// *-polynomial over element variables and complex constants.
struct CTerm {
  enum class Kind { Const, Var, Add, Sub, Neg, Mul, Star };

  Kind kind = Kind::Const;
  Complex value;  // Const
  std::string var;
  std::vector<CTerm> args;

  static CTerm constant(Complex c) { return CTerm{Kind::Const, c, {}, {}}; }
  static CTerm variable(std::string v) { return CTerm{Kind::Var, {}, std::move(v), {}}; }
  static CTerm add(std::vector<CTerm> a) { return CTerm{Kind::Add, {}, {}, std::move(a)}; }
  static CTerm sub(CTerm a, CTerm b) { return CTerm{Kind::Sub, {}, {}, {std::move(a), std::move(b)}}; }
  static CTerm neg(CTerm a) { return CTerm{Kind::Neg, {}, {}, {std::move(a)}}; }
  static CTerm mul(std::vector<CTerm> a) { return CTerm{Kind::Mul, {}, {}, std::move(a)}; }
  static CTerm star(CTerm a) { return CTerm{Kind::Star, {}, {}, {std::move(a)}}; }

  friend bool operator==(const CTerm&, const CTerm&) = default;
};

enum class Sort { Ball, SelfAdjoint, Positive, Projection };

// Continuous formula. Values are reals >= 0; constants lie in [0, 1] and
// scalars are >= 0.
struct CFormula {
  enum class Kind { Const, Norm, Add, Monus, Max, Min, Scale, AbsDiff, Sup, Inf };

  Kind kind = Kind::Const;
  double value = 0.0;  // Const, Scale factor
  CTerm term;          // Norm
  std::vector<CFormula> subs;
  std::string var;  // Sup, Inf
  Sort sort = Sort::Ball;

  static CFormula constant(double c);
  static CFormula norm(CTerm t) { return CFormula{Kind::Norm, 0.0, std::move(t), {}, {}, Sort::Ball}; }
  static CFormula add(CFormula a, CFormula b) { return nary(Kind::Add, {std::move(a), std::move(b)}); }
  static CFormula monus(CFormula a, CFormula b) { return nary(Kind::Monus, {std::move(a), std::move(b)}); }
  static CFormula max(std::vector<CFormula> a);
  static CFormula min(std::vector<CFormula> a);
  static CFormula scale(double r, CFormula a);
  static CFormula absdiff(CFormula a, CFormula b) { return nary(Kind::AbsDiff, {std::move(a), std::move(b)}); }
  static CFormula sup(std::string v, Sort s, CFormula body) { return quant(Kind::Sup, std::move(v), s, std::move(body)); }
  static CFormula inf(std::string v, Sort s, CFormula body) { return quant(Kind::Inf, std::move(v), s, std::move(body)); }

  std::vector<std::string> free_variables() const;
  int quantifier_depth() const;

  friend bool operator==(const CFormula&, const CFormula&) = default;

private:
  static CFormula nary(Kind k, std::vector<CFormula> subs) {
    return CFormula{k, 0.0, {}, std::move(subs), {}, Sort::Ball};
  }
  static CFormula quant(Kind k, std::string v, Sort s, CFormula body) {
    return CFormula{k, 0.0, {}, {std::move(body)}, std::move(v), s};
  }
};

// Lipschitz data, valid whenever every variable has norm <= 1 (true of all
// four sorts and required of parameters). Moduli are with respect to the sup
// norm of the variable; variables not listed have modulus 0.
struct TermBounds {
  double norm_bound = 0.0;
  std::map<std::string, double> modulus;
};
TermBounds term_bounds(const CTerm& t);

struct FormulaBounds {
  double upper = 0.0;  // value always lies in [0, upper]
  std::map<std::string, double> modulus;
};
FormulaBounds formula_bounds(const CFormula& phi);

std::string to_string(Sort s);
std::string to_string(const CTerm& t);
std::string to_string(const CFormula& phi);

// sup for forall, inf for exists, over projections. A sentence true in CL(X)
// translates to value 0 in C(X); a false one to value 1.
CFormula translate_fo(const FoFormula& phi);

// psi with the infimum over y of the projection sort and p free. On the
// finite range {0, 1, i, -1, -i} only y y* and y* y enter, and those range
// over projections, so this agrees with psi_infinite_projection.
CFormula psi_formula(const std::string& p = "p");

// Seeded random formulas (quantifier depth <= max_depth) for round-trip and
// consistency tests. Variables are drawn from bound names only.
std::vector<CFormula> generate_cformulas(std::size_t count, int max_depth, std::uint64_t seed);

}  // namespace cwb
