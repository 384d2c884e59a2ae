#include "cwb/batheory.hpp"

#include <algorithm>
#include <random>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

std::optional<std::uint64_t> add_capped(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b) {
  if (!a || !b) return std::nullopt;
  if (*a > UINT64_MAX - *b) return std::nullopt;
  return *a + *b;
}

// alpha with every exponent lowered by one and exponent-0 terms dropped.
Ordinal lower_exponents(const Ordinal& alpha) {
  std::vector<OrdinalTerm> terms;
  for (const auto& t : alpha.terms()) {
    if (t.exponent.is_zero()) continue;
    terms.push_back(OrdinalTerm{Ordinal(t.exponent.finite_value() - 1), t.coefficient});
  }
  return Ordinal::from_terms(terms);
}

}  // namespace

BADescriptor BADescriptor::finite(std::uint64_t n) {
  if (n == 0) throw PreconditionError("finite(n) requires n >= 1; use trivial for the one-element algebra");
  return BADescriptor{Kind::Finite, n, {}, {}};
}

BADescriptor BADescriptor::interval_algebra(Ordinal alpha) {
  if (alpha.is_zero()) throw PreconditionError("interval algebra of 0 is trivial; use trivial");
  if (alpha.nesting_depth() > 1) {
    throw PreconditionError("interval algebra requires finite exponents, got " + alpha.to_string());
  }
  return BADescriptor{Kind::IntervalAlgebra, 0, std::move(alpha), {}};
}

BADescriptor BADescriptor::product(std::vector<BADescriptor> factors) {
  if (factors.empty()) throw PreconditionError("product requires at least one factor");
  return BADescriptor{Kind::Product, 0, {}, std::move(factors)};
}

bool BADescriptor::is_infinite() const {
  switch (kind) {
    case Kind::Trivial:
    case Kind::Finite: return false;
    case Kind::IntervalAlgebra: return !alpha.is_finite();
    case Kind::Product:
      return std::any_of(factors.begin(), factors.end(), [](const auto& f) { return f.is_infinite(); });
    default: return true;
  }
}

std::optional<std::uint64_t> BADescriptor::atom_count() const {
  switch (kind) {
    case Kind::Trivial:
    case Kind::PowersetModFin:
    case Kind::FreeAtomless: return 0;
    case Kind::Finite: return atoms;
    case Kind::FinCof:
    case Kind::PowersetOmega: return std::nullopt;
    case Kind::IntervalAlgebra:
      if (alpha.is_finite()) return alpha.finite_value();
      return std::nullopt;
    case Kind::Product: {
      std::optional<std::uint64_t> total = 0;
      for (const auto& f : factors) total = add_capped(total, f.atom_count());
      return total;
    }
  }
  return 0;
}

bool BADescriptor::is_atomic() const {
  switch (kind) {
    case Kind::PowersetModFin:
    case Kind::FreeAtomless: return false;
    case Kind::Product:
      return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.is_atomic(); });
    default: return true;
  }
}

bool BADescriptor::has_atomless_part() const {
  switch (kind) {
    case Kind::PowersetModFin:
    case Kind::FreeAtomless: return true;
    case Kind::Product:
      return std::any_of(factors.begin(), factors.end(), [](const auto& f) { return f.has_atomless_part(); });
    default: return false;
  }
}

std::string BADescriptor::to_string() const {
  switch (kind) {
    case Kind::Trivial: return "trivial";
    case Kind::Finite: return "finite(" + std::to_string(atoms) + ")";
    case Kind::FinCof: return "fincof";
    case Kind::PowersetOmega: return "P(omega)";
    case Kind::PowersetModFin: return "P(omega)/fin";
    case Kind::FreeAtomless: return "free";
    case Kind::IntervalAlgebra: return "intalg(" + alpha.to_string() + ")";
    case Kind::Product: {
      std::string out = "prod(";
      for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? ", " : "") + factors[i].to_string();
      return out + ")";
    }
  }
  return "?";
}

BADescriptor ba_derivative(const BADescriptor& d) {
  using K = BADescriptor::Kind;
  switch (d.kind) {
    case K::Trivial:
    case K::Finite:
    case K::FreeAtomless:
    case K::PowersetModFin: return BADescriptor::trivial();
    // Finite-cofinite sets modulo finite sets: only 0 and 1 survive.
    case K::FinCof: return BADescriptor::finite(1);
    case K::PowersetOmega: return BADescriptor::powerset_mod_fin();
    case K::IntervalAlgebra: {
      Ordinal lowered = lower_exponents(d.alpha);
      if (lowered.is_zero()) return BADescriptor::trivial();
      if (lowered.is_finite()) return BADescriptor::finite(lowered.finite_value());
      return BADescriptor::interval_algebra(std::move(lowered));
    }
    case K::Product: {
      std::vector<BADescriptor> parts;
      for (const auto& f : d.factors) {
        auto df = ba_derivative(f);
        if (!df.is_trivial()) parts.push_back(std::move(df));
      }
      if (parts.empty()) return BADescriptor::trivial();
      if (parts.size() == 1) return std::move(parts.front());
      return BADescriptor::product(std::move(parts));
    }
  }
  return BADescriptor::trivial();
}

std::string ErshovInvariant::to_string() const {
  return "(" + std::to_string(level) + ", " + (atoms ? std::to_string(*atoms) : "w") + ", " +
         (atomless ? "true" : "false") + ")";
}

std::vector<BADescriptor> derivative_chain(const BADescriptor& d) {
  std::vector<BADescriptor> chain;
  BADescriptor stage = d;
  while (!stage.is_trivial()) {
    if (chain.size() == kMaxDerivativeSteps) {
      throw ResourceError("derivative chain of " + d.to_string() + " exceeds 64 steps");
    }
    chain.push_back(stage);
    stage = ba_derivative(stage);
  }
  return chain;
}

ErshovInvariant ershov_invariants(const BADescriptor& d) {
  const auto chain = derivative_chain(d);
  if (chain.empty()) return ErshovInvariant{0, 0, false};
  const auto& last = chain.back();
  return ErshovInvariant{chain.size() - 1, last.atom_count(), last.has_atomless_part()};
}

bool ba_equiv(const BADescriptor& a, const BADescriptor& b) { return ershov_invariants(a) == ershov_invariants(b); }

bool cstar_equiv(const BADescriptor& a, const BADescriptor& b) { return ba_equiv(a, b); }

std::vector<ErshovInvariant> enumerate_theories(std::size_t k) {
  if (k > kMaxEnumerate) throw ResourceError("enumerate_theories is limited to 10000 entries");
  std::vector<ErshovInvariant> out;
  out.reserve(k);
  for (std::uint64_t weight = 1; out.size() < k; ++weight) {
    for (std::uint64_t level = 0; level <= weight && out.size() < k; ++level) {
      for (int flag = 0; flag <= 1 && out.size() < k; ++flag) {
        if (level + static_cast<std::uint64_t>(flag) > weight) continue;
        const std::uint64_t atoms = weight - level - static_cast<std::uint64_t>(flag);
        if (atoms == 0 && flag == 0) continue;
        out.push_back(ErshovInvariant{level, atoms, flag == 1});
      }
    }
  }
  return out;
}

std::optional<ConflictNote> equivalence_conflict(const BADescriptor& a, const BADescriptor& b) {
  if (!a.is_infinite() || !b.is_infinite()) return std::nullopt;
  std::string hypothesis;
  const auto na = a.atom_count();
  const auto nb = b.atom_count();
  if (na && nb && *na == *nb) {
    hypothesis = "same finite number of isolated points (" + std::to_string(*na) + ")";
  } else if (a.is_atomic() && b.is_atomic()) {
    hypothesis = "both have a dense set of isolated points";
  } else {
    return std::nullopt;
  }
  if (ba_equiv(a, b)) return std::nullopt;
  return ConflictNote{"cor:elementaryEquivalence", hypothesis, true, false};
}

namespace {

BADescriptor random_descriptor(std::mt19937_64& rng, int depth) {
  auto pick = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
  const std::uint64_t choice = pick(depth > 0 ? 8 : 7);
  switch (choice) {
    case 0: return BADescriptor::finite(1 + pick(6));
    case 1: return BADescriptor::fincof();
    case 2: return BADescriptor::powerset_omega();
    case 3: return BADescriptor::powerset_mod_fin();
    case 4: return BADescriptor::free_atomless();
    case 5:
    case 6: {
      std::vector<OrdinalTerm> terms;
      for (std::uint64_t e = 0; e <= 4; ++e) {
        const std::uint64_t c = pick(4);
        if (c > 0) terms.push_back(OrdinalTerm{Ordinal(e), c});
      }
      Ordinal alpha = Ordinal::from_terms(terms);
      if (alpha.is_zero()) alpha = Ordinal::omega();
      return BADescriptor::interval_algebra(std::move(alpha));
    }
    default: {
      std::vector<BADescriptor> factors;
      for (std::uint64_t n = 2 + pick(2); n-- > 0;) factors.push_back(random_descriptor(rng, depth - 1));
      return BADescriptor::product(std::move(factors));
    }
  }
}

}  // namespace

std::vector<BADescriptor> generate_descriptors(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BADescriptor> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_descriptor(rng, 2));
  return out;
}

}  // namespace cwb
