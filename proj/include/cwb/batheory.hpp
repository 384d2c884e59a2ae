#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwb/ordinal.hpp"

namespace cwb {

// Symbolic description of a countable (or separable-dual) Boolean algebra
// from a small closed class whose Tarski-Ershov derivative is computable by
// rule.
struct BADescriptor {
  enum class Kind { Trivial, Finite, FinCof, PowersetOmega, PowersetModFin, FreeAtomless, IntervalAlgebra, Product };

  Kind kind = Kind::Trivial;
  std::uint64_t atoms = 0;             // Finite
  Ordinal alpha;                       // IntervalAlgebra
  std::vector<BADescriptor> factors;   // Product

  static BADescriptor trivial() { return {}; }
  static BADescriptor finite(std::uint64_t n);
  static BADescriptor fincof() { return BADescriptor{Kind::FinCof, 0, {}, {}}; }
  static BADescriptor powerset_omega() { return BADescriptor{Kind::PowersetOmega, 0, {}, {}}; }
  static BADescriptor powerset_mod_fin() { return BADescriptor{Kind::PowersetModFin, 0, {}, {}}; }
  static BADescriptor free_atomless() { return BADescriptor{Kind::FreeAtomless, 0, {}, {}}; }
  // Requires 0 < alpha < omega^omega.
  static BADescriptor interval_algebra(Ordinal alpha);
  // Requires a nonempty factor list.
  static BADescriptor product(std::vector<BADescriptor> factors);

  bool is_trivial() const { return kind == Kind::Trivial; }
  bool is_infinite() const;
  // Atoms of the algebra itself, capped at omega (nullopt).
  std::optional<std::uint64_t> atom_count() const;
  // Every nonzero element lies above an atom.
  bool is_atomic() const;
  // Some nonzero element has no atom below it.
  bool has_atomless_part() const;

  // Textual form accepted by parse_descriptor.
  std::string to_string() const;

  friend bool operator==(const BADescriptor&, const BADescriptor&) = default;
};

// Quotient by the ideal generated by atoms and atomless elements.
BADescriptor ba_derivative(const BADescriptor& d);

struct ErshovInvariant {
  std::uint64_t level = 0;
  std::optional<std::uint64_t> atoms;  // nullopt is omega
  bool atomless = false;

  std::string to_string() const;
  friend bool operator==(const ErshovInvariant&, const ErshovInvariant&) = default;
};

inline constexpr int kMaxDerivativeSteps = 64;

// Derivative chain d, d', d'', ... up to (excluding) the first Trivial stage.
std::vector<BADescriptor> derivative_chain(const BADescriptor& d);

ErshovInvariant ershov_invariants(const BADescriptor& d);
bool ba_equiv(const BADescriptor& a, const BADescriptor& b);
// C(X) = C(Y) elementarily iff CL(X) = CL(Y) elementarily.
bool cstar_equiv(const BADescriptor& a, const BADescriptor& b);

// The first k complete theories, without repetition. Invariants of nontrivial
// algebras with finite-level chains have a finite atom count at the last
// stage, so the triples are (n, m, flag) with m finite and (m, flag) !=
// (0, false). They are listed by weight n + m + flag, then level, then flag,
// then atom count; every triple appears at a finite position.
std::vector<ErshovInvariant> enumerate_theories(std::size_t k);
inline constexpr std::size_t kMaxEnumerate = 10000;

// Disagreement between the invariant verdict and the sufficient condition
// "both infinite, and either the same finite number of isolated points or
// both with a dense set of isolated points". Present only when that
// condition holds and the invariants differ.
struct ConflictNote {
  std::string cites;
  std::string hypothesis;
  bool predicted = true;
  bool computed = false;
};

std::optional<ConflictNote> equivalence_conflict(const BADescriptor& a, const BADescriptor& b);

// Seeded random descriptors (nesting depth <= 2, interval algebras with
// exponents <= 4 and coefficients <= 3).
std::vector<BADescriptor> generate_descriptors(std::size_t count, std::uint64_t seed);

}  // namespace cwb
