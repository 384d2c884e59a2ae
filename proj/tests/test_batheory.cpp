#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "cwb/batheory.hpp"
#include "cwb/efgames.hpp"
#include "cwb/errors.hpp"
#include "cwb/fo.hpp"
#include "doctest.h"

using cwb::BADescriptor;
using cwb::ErshovInvariant;
using cwb::Ordinal;

namespace {

Ordinal w() { return Ordinal::omega(); }
Ordinal n(std::uint64_t k) { return Ordinal(k); }
Ordinal wpow(std::uint64_t e, std::uint64_t c = 1) { return Ordinal::monomial(Ordinal(e), c); }

// Point-set oracle for the interval algebra of alpha, i.e. the clopen algebra
// of the space of ordinals <= alpha. The k-th Cantor-Bendixson derivative of
// that space is the set of nonzero multiples of omega^k that are <= alpha;
// the invariant is read off the last nonempty one, whose points are all
// isolated in it.
ErshovInvariant interval_oracle(const Ordinal& alpha) {
  std::uint64_t level = 0;
  while (level < 64 && cwb::pow(w(), n(level + 1)) <= alpha) ++level;
  const Ordinal block = cwb::pow(w(), n(level));
  std::uint64_t count = 0;
  while (cwb::mul(block, n(count + 1)) <= alpha) ++count;
  return ErshovInvariant{level, count, false};
}

std::vector<Ordinal> interval_family() {
  // exponents <= 4, coefficients <= 3
  std::vector<Ordinal> out{Ordinal{}};
  for (std::uint64_t e = 5; e-- > 0;) {
    const std::size_t existing = out.size();
    for (std::size_t i = 0; i < existing; ++i) {
      for (std::uint64_t c = 1; c <= 3; ++c) out.push_back(cwb::add(out[i], wpow(e, c)));
    }
  }
  out.erase(out.begin());
  return out;
}

}  // namespace

TEST_CASE("derivative examples") {
  CHECK(cwb::ba_derivative(BADescriptor::fincof()) == BADescriptor::finite(1));
  CHECK(cwb::ba_derivative(BADescriptor::free_atomless()).is_trivial());
  CHECK(cwb::ba_derivative(BADescriptor::powerset_omega()) == BADescriptor::powerset_mod_fin());
  const auto d = BADescriptor::interval_algebra(cwb::add(cwb::add(wpow(2, 2), wpow(1, 3)), n(4)));
  CHECK(cwb::ba_derivative(d) == BADescriptor::interval_algebra(cwb::add(wpow(1, 2), n(3))));
  CHECK(cwb::ba_derivative(BADescriptor::interval_algebra(cwb::add(w(), n(5)))) == BADescriptor::finite(1));
}

TEST_CASE("invariant examples") {
  CHECK(cwb::ershov_invariants(BADescriptor::finite(3)) == ErshovInvariant{0, 3, false});
  CHECK(cwb::ershov_invariants(BADescriptor::free_atomless()) == ErshovInvariant{0, 0, true});
  CHECK(cwb::ershov_invariants(BADescriptor::powerset_omega()) == ErshovInvariant{1, 0, true});
  CHECK(cwb::ershov_invariants(BADescriptor::fincof()) == ErshovInvariant{1, 1, false});
  CHECK(cwb::ershov_invariants(BADescriptor::trivial()) == ErshovInvariant{0, 0, false});
  CHECK(cwb::ershov_invariants(BADescriptor::interval_algebra(w())).to_string() == "(1, 1, false)");
}

TEST_CASE("equivalence examples") {
  CHECK(cwb::ba_equiv(BADescriptor::powerset_mod_fin(), BADescriptor::free_atomless()));
  CHECK_FALSE(cwb::ba_equiv(BADescriptor::finite(2), BADescriptor::finite(3)));
  CHECK_FALSE(cwb::ba_equiv(BADescriptor::interval_algebra(w()), BADescriptor::interval_algebra(cwb::mul(w(), n(2)))));
  CHECK(cwb::cstar_equiv(BADescriptor::free_atomless(), BADescriptor::powerset_mod_fin()));
  CHECK_FALSE(cwb::cstar_equiv(BADescriptor::powerset_omega(), BADescriptor::free_atomless()));
  CHECK(cwb::ba_equiv(BADescriptor::interval_algebra(w()), BADescriptor::fincof()));
}

TEST_CASE("interval algebras: invariants match the point-set oracle, chain length = 1 + top exponent") {
  const auto family = interval_family();
  CHECK(family.size() == 1023);
  for (const auto& alpha : family) {
    const auto d = BADescriptor::interval_algebra(alpha);
    INFO(alpha.to_string());
    REQUIRE(cwb::ershov_invariants(d) == interval_oracle(alpha));
    REQUIRE(cwb::derivative_chain(d).size() == 1 + alpha.leading_exponent().finite_value());
  }
}

TEST_CASE("descriptor preconditions") {
  CHECK_THROWS_AS(BADescriptor::finite(0), cwb::PreconditionError);
  CHECK_THROWS_AS(BADescriptor::interval_algebra(Ordinal{}), cwb::PreconditionError);
  CHECK_THROWS_AS(BADescriptor::interval_algebra(Ordinal::monomial(w())), cwb::PreconditionError);
  CHECK_THROWS_AS(BADescriptor::product({}), cwb::PreconditionError);
}

TEST_CASE("product laws") {
  const auto corpus = cwb::generate_descriptors(60, 3);
  for (const auto& d : corpus) {
    const auto with_trivial = BADescriptor::product({d, BADescriptor::trivial()});
    CHECK(cwb::ershov_invariants(with_trivial) == cwb::ershov_invariants(d));
    CHECK(cwb::ershov_invariants(BADescriptor::product({d})) == cwb::ershov_invariants(d));
  }
  // Finite pieces add up; an atomless summand sets the flag.
  CHECK(cwb::ershov_invariants(BADescriptor::product({BADescriptor::finite(2), BADescriptor::finite(3)})) ==
        ErshovInvariant{0, 5, false});
  CHECK(cwb::ershov_invariants(BADescriptor::product({BADescriptor::finite(2), BADescriptor::free_atomless()})) ==
        ErshovInvariant{0, 2, true});
  // The deepest factor decides the level.
  CHECK(cwb::ershov_invariants(BADescriptor::product({BADescriptor::fincof(), BADescriptor::interval_algebra(wpow(2))})) ==
        ErshovInvariant{2, 1, false});
}

TEST_CASE("ba_equiv is an equivalence relation on the descriptor corpus") {
  const auto corpus = cwb::generate_descriptors(60, 17);
  for (const auto& a : corpus) {
    CHECK(cwb::ba_equiv(a, a));
    for (const auto& b : corpus) {
      REQUIRE(cwb::ba_equiv(a, b) == cwb::ba_equiv(b, a));
      if (!cwb::ba_equiv(a, b)) continue;
      for (const auto& c : corpus) {
        if (cwb::ba_equiv(b, c)) REQUIRE(cwb::ba_equiv(a, c));
      }
    }
  }
}

TEST_CASE("finite algebras: invariants, EF games and model checking agree") {
  const auto sentences = cwb::generate_sentences(200, 3, 42);
  std::vector<std::vector<bool>> verdicts;
  for (std::size_t m = 1; m <= 5; ++m) verdicts.push_back(cwb::fo_eval_corpus(sentences, cwb::FiniteBoolAlg(m)));
  for (std::uint64_t m = 1; m <= 5; ++m) {
    for (std::uint64_t k = 1; k <= 5; ++k) {
      const bool inv = cwb::ba_equiv(BADescriptor::finite(m), BADescriptor::finite(k));
      CHECK(inv == (m == k));
      CHECK(inv == cwb::ef::ef_finite_bas(cwb::FiniteBoolAlg(m), cwb::FiniteBoolAlg(k), 3));
      CHECK(inv == (verdicts[m - 1] == verdicts[k - 1]));
      CHECK(inv == cwb::isomorphic(cwb::FiniteBoolAlg(m), cwb::FiniteBoolAlg(k)));
    }
  }
}

TEST_CASE("enumerate_theories") {
  CHECK(cwb::enumerate_theories(1) == std::vector<ErshovInvariant>{ErshovInvariant{0, 1, false}});
  const auto first = cwb::enumerate_theories(100);
  CHECK(first.size() == 100);
  std::set<std::tuple<std::uint64_t, std::uint64_t, bool>> seen;
  for (const auto& t : cwb::enumerate_theories(10000)) {
    REQUIRE(t.atoms.has_value());
    REQUIRE((*t.atoms > 0 || t.atomless));
    REQUIRE(seen.emplace(t.level, *t.atoms, t.atomless).second);
  }
  CHECK(seen.size() == 10000);
  // Prefix stability.
  const auto more = cwb::enumerate_theories(1000);
  CHECK(std::equal(first.begin(), first.end(), more.begin()));
  CHECK_THROWS_AS(cwb::enumerate_theories(10001), cwb::ResourceError);

  const auto all = cwb::enumerate_theories(10000);
  for (const auto& d : cwb::generate_descriptors(200, 5)) {
    const auto inv = cwb::ershov_invariants(d);
    INFO(d.to_string());
    CHECK(std::find(all.begin(), all.end(), inv) != all.end());
  }
}

TEST_CASE("conflict notes") {
  const auto a = cwb::equivalence_conflict(BADescriptor::interval_algebra(w()),
                                           BADescriptor::interval_algebra(cwb::mul(w(), n(2))));
  REQUIRE(a.has_value());
  CHECK(a->cites == "cor:elementaryEquivalence");
  CHECK_FALSE(a->computed);
  CHECK(cwb::equivalence_conflict(BADescriptor::fincof(), BADescriptor::powerset_omega()).has_value());
  // Agreement, or hypothesis not met: no note.
  CHECK_FALSE(cwb::equivalence_conflict(BADescriptor::powerset_mod_fin(), BADescriptor::free_atomless()));
  CHECK_FALSE(cwb::equivalence_conflict(BADescriptor::finite(2), BADescriptor::finite(3)));
  CHECK_FALSE(cwb::equivalence_conflict(BADescriptor::powerset_omega(), BADescriptor::free_atomless()));
}

TEST_CASE("to_string") {
  CHECK(BADescriptor::product({BADescriptor::fincof(), BADescriptor::interval_algebra(cwb::add(wpow(2, 2), n(1)))})
            .to_string() == "prod(fincof, intalg(w^2*2 + 1))");
  CHECK(BADescriptor::powerset_mod_fin().to_string() == "P(omega)/fin");
}
