#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace cwb {

class Ordinal;

// One Cantor normal form term: omega^exponent * coefficient.
struct OrdinalTerm;

// An ordinal below epsilon_0 in Cantor normal form
//   omega^e1 * c1 + ... + omega^ek * ck,   e1 > ... > ek,  ci >= 1.
// The empty term list is 0. Exponents are themselves ordinals.
// Values are immutable once built; every public constructor normalizes.
class Ordinal {
public:
  using Coefficient = std::uint64_t;

  Ordinal() = default;
  explicit Ordinal(Coefficient n);

  static Ordinal omega();
  // omega^exponent * coefficient (coefficient 0 yields 0).
  static Ordinal monomial(const Ordinal& exponent, Coefficient coefficient = 1);
  // Builds from terms in any order; re-normalizes with ordinal addition.
  static Ordinal from_terms(const std::vector<OrdinalTerm>& terms);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Finite value; only meaningful when is_finite().
  Coefficient finite_value() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }
  // Largest exponent; 0 for the zero ordinal.
  Ordinal leading_exponent() const;
  // Depth of exponent nesting: 0 for finite, 1 for < omega^omega, ...
  int nesting_depth() const;

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

private:
  std::vector<OrdinalTerm> terms_;

  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal left_subtract(const Ordinal&, const Ordinal&);
  friend Ordinal mul(const Ordinal&, const Ordinal&);
};

struct OrdinalTerm {
  Ordinal exponent;
  Ordinal::Coefficient coefficient = 1;

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

enum class OrdinalOp { Add, Mul, Pow };
enum class Comparison { Less, Equal, Greater };

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
// 0^0 is 1 by convention.
Ordinal pow(const Ordinal& base, const Ordinal& exponent);
Ordinal arith(OrdinalOp op, const Ordinal& a, const Ordinal& b);

// The unique x with a + x = b. Requires a <= b.
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

Comparison compare(const Ordinal& a, const Ordinal& b);

// alpha = omega^omega * quotient + residue with residue < omega^omega.
struct OmegaOmegaSplit {
  Ordinal quotient;
  Ordinal residue;
};

OmegaOmegaSplit split_mod_omega_omega(const Ordinal& a);

// Elementary equivalence of ordinals as linear orders: equal residues mod
// omega^omega, and the omega^omega parts either both zero or both nonzero.
bool ordinal_equiv(const Ordinal& a, const Ordinal& b);

// Equivalence of the projection posets of the generalized Calkin algebras
// indexed by a and b. The ordinal is interpretable in both, so this reduces
// to ordinal_equiv.
bool calkin_equiv(const Ordinal& a, const Ordinal& b);

}  // namespace cwb
