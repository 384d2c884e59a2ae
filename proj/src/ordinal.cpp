#include "cwb/ordinal.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

using Coefficient = Ordinal::Coefficient;

Coefficient checked_add(Coefficient a, Coefficient b) {
  if (a > std::numeric_limits<Coefficient>::max() - b) {
    throw std::overflow_error("ordinal coefficient overflow");
  }
  return a + b;
}

Coefficient checked_mul(Coefficient a, Coefficient b) {
  if (a != 0 && b > std::numeric_limits<Coefficient>::max() / a) {
    throw std::overflow_error("ordinal coefficient overflow");
  }
  return a * b;
}

std::string exponent_to_string(const Ordinal& e) {
  if (e.is_finite()) return std::to_string(e.finite_value());
  if (e == Ordinal::omega()) return "w";
  return "(" + e.to_string() + ")";
}

}  // namespace

Ordinal::Ordinal(Coefficient n) {
  if (n > 0) terms_.push_back(OrdinalTerm{Ordinal{}, n});
}

Ordinal Ordinal::omega() { return monomial(Ordinal(1)); }

Ordinal Ordinal::monomial(const Ordinal& exponent, Coefficient coefficient) {
  Ordinal r;
  if (coefficient > 0) r.terms_.push_back(OrdinalTerm{exponent, coefficient});
  return r;
}

Ordinal Ordinal::from_terms(const std::vector<OrdinalTerm>& terms) {
  Ordinal r;
  for (const auto& t : terms) r = add(r, monomial(t.exponent, t.coefficient));
  return r;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

Coefficient Ordinal::finite_value() const {
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

Ordinal Ordinal::leading_exponent() const {
  return terms_.empty() ? Ordinal{} : terms_.front().exponent;
}

int Ordinal::nesting_depth() const {
  int depth = 0;
  for (const auto& t : terms_) {
    if (!t.exponent.is_zero()) depth = std::max(depth, 1 + t.exponent.nesting_depth());
  }
  return depth;
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    first = false;
    if (t.exponent.is_zero()) {
      out << t.coefficient;
      continue;
    }
    out << "w";
    if (t.exponent != Ordinal(1)) out << "^" << exponent_to_string(t.exponent);
    if (t.coefficient != 1) out << "*" << t.coefficient;
  }
  return out.str();
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ta = a.terms_[i];
    const auto& tb = b.terms_[i];
    if (auto c = ta.exponent <=> tb.exponent; c != 0) return c;
    if (auto c = ta.coefficient <=> tb.coefficient; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

Comparison compare(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Comparison::Less;
  if (c > 0) return Comparison::Greater;
  return Comparison::Equal;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms_.front().exponent;
  Ordinal r;
  // Terms of a with exponent below b's leading exponent are absorbed.
  for (const auto& t : a.terms_) {
    if (t.exponent > lead) {
      r.terms_.push_back(t);
    } else {
      if (t.exponent == lead) {
        r.terms_.push_back(OrdinalTerm{lead, checked_add(t.coefficient, b.terms_.front().coefficient)});
        r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
        return r;
      }
      break;
    }
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  return r;
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw PreconditionError("left_subtract requires a <= b");
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  std::size_t i = 0;
  while (i < n && a.terms_[i] == b.terms_[i]) ++i;
  Ordinal r;
  if (i == a.terms_.size()) {
    r.terms_.assign(b.terms_.begin() + static_cast<std::ptrdiff_t>(i), b.terms_.end());
    return r;
  }
  // a <= b and they first differ at i, so b's term i is the larger one.
  const auto& ta = a.terms_[i];
  const auto& tb = b.terms_[i];
  if (tb.exponent == ta.exponent) {
    r.terms_.push_back(OrdinalTerm{tb.exponent, tb.coefficient - ta.coefficient});
    r.terms_.insert(r.terms_.end(), b.terms_.begin() + static_cast<std::ptrdiff_t>(i) + 1, b.terms_.end());
  } else {
    r.terms_.assign(b.terms_.begin() + static_cast<std::ptrdiff_t>(i), b.terms_.end());
  }
  return r;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal{};
  const auto& lead = a.terms_.front();
  Ordinal r;
  for (const auto& t : b.terms_) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      piece = a;
      piece.terms_.front().coefficient = checked_mul(lead.coefficient, t.coefficient);
    } else {
      piece = Ordinal::monomial(add(lead.exponent, t.exponent), t.coefficient);
    }
    r = add(r, piece);
  }
  return r;
}

Ordinal pow(const Ordinal& base, const Ordinal& exponent) {
  if (exponent.is_zero()) return Ordinal(1);
  if (base.is_zero()) return Ordinal{};
  if (base == Ordinal(1)) return Ordinal(1);

  // exponent = limit_part + k with k finite.
  Ordinal limit_part;
  Coefficient k = 0;
  {
    std::vector<OrdinalTerm> lim;
    for (const auto& t : exponent.terms()) {
      if (t.exponent.is_zero()) {
        k = t.coefficient;
      } else {
        lim.push_back(t);
      }
    }
    limit_part = Ordinal::from_terms(lim);
  }

  auto power_by_squaring = [](Ordinal x, Coefficient e) {
    Ordinal acc(1);
    while (e > 0) {
      if (e & 1U) acc = mul(acc, x);
      e >>= 1U;
      if (e > 0) x = mul(x, x);
    }
    return acc;
  };

  if (base.is_finite()) {
    const Ordinal finite_part = power_by_squaring(base, k);
    if (limit_part.is_zero()) return finite_part;
    // n^(omega*g + k) = omega^g * n^k, where omega*g = limit_part.
    std::vector<OrdinalTerm> g;
    for (const auto& t : limit_part.terms()) {
      g.push_back(OrdinalTerm{left_subtract(Ordinal(1), t.exponent), t.coefficient});
    }
    return mul(Ordinal::monomial(Ordinal::from_terms(g)), finite_part);
  }

  Ordinal limit_power(1);
  if (!limit_part.is_zero()) {
    limit_power = Ordinal::monomial(mul(base.leading_exponent(), limit_part));
  }
  return mul(limit_power, power_by_squaring(base, k));
}

Ordinal arith(OrdinalOp op, const Ordinal& a, const Ordinal& b) {
  switch (op) {
    case OrdinalOp::Add: return add(a, b);
    case OrdinalOp::Mul: return mul(a, b);
    case OrdinalOp::Pow: return pow(a, b);
  }
  throw std::logic_error("unknown ordinal op");
}

OmegaOmegaSplit split_mod_omega_omega(const Ordinal& a) {
  const Ordinal omega = Ordinal::omega();
  std::vector<OrdinalTerm> quotient;
  std::vector<OrdinalTerm> residue;
  for (const auto& t : a.terms()) {
    if (t.exponent.is_finite()) {
      residue.push_back(t);
    } else {
      // omega^omega * omega^g = omega^(omega + g).
      quotient.push_back(OrdinalTerm{left_subtract(omega, t.exponent), t.coefficient});
    }
  }
  return OmegaOmegaSplit{Ordinal::from_terms(quotient), Ordinal::from_terms(residue)};
}

bool ordinal_equiv(const Ordinal& a, const Ordinal& b) {
  const auto sa = split_mod_omega_omega(a);
  const auto sb = split_mod_omega_omega(b);
  return sa.residue == sb.residue && sa.quotient.is_zero() == sb.quotient.is_zero();
}

bool calkin_equiv(const Ordinal& a, const Ordinal& b) { return ordinal_equiv(a, b); }

}  // namespace cwb
