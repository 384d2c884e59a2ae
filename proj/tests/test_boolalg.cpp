#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cwb/boolalg.hpp"
#include "cwb/errors.hpp"
#include "cwb/fo.hpp"
#include "doctest.h"

using cwb::BAElement;
using cwb::FiniteBoolAlg;
using cwb::FiniteSpace;
using cwb::FoFormula;
using cwb::FoTerm;
using cwb::SpaceMap;

namespace {

SpaceMap random_map(std::mt19937_64& rng, std::size_t from, std::size_t to) {
  SpaceMap f{FiniteSpace{from}, FiniteSpace{to}, {}};
  for (std::size_t i = 0; i < from; ++i) f.image.push_back(static_cast<std::size_t>(rng() % to));
  return f;
}

// Naive reference evaluator: variables looked up by name in a std::map,
// quantifiers loop over 0 .. 2^n - 1 directly.
BAElement naive_term(const FoTerm& t, std::size_t atoms, std::map<std::string, BAElement>& env) {
  const BAElement top = atoms == 0 ? 0 : static_cast<BAElement>((1U << atoms) - 1);
  switch (t.kind) {
    case FoTerm::Kind::Var: return env.at(t.var);
    case FoTerm::Kind::Zero: return 0;
    case FoTerm::Kind::One: return top;
    case FoTerm::Kind::Meet: return naive_term(t.args[0], atoms, env) & naive_term(t.args[1], atoms, env);
    case FoTerm::Kind::Join: return naive_term(t.args[0], atoms, env) | naive_term(t.args[1], atoms, env);
    case FoTerm::Kind::Complement: return top & ~naive_term(t.args[0], atoms, env);
  }
  return 0;
}

bool naive_eval(const FoFormula& f, std::size_t atoms, std::map<std::string, BAElement>& env) {
  switch (f.kind) {
    case FoFormula::Kind::Eq: return naive_term(f.terms[0], atoms, env) == naive_term(f.terms[1], atoms, env);
    case FoFormula::Kind::Leq: {
      const BAElement a = naive_term(f.terms[0], atoms, env);
      return (a & naive_term(f.terms[1], atoms, env)) == a;
    }
    case FoFormula::Kind::Not: return !naive_eval(f.subs[0], atoms, env);
    case FoFormula::Kind::And: return naive_eval(f.subs[0], atoms, env) && naive_eval(f.subs[1], atoms, env);
    case FoFormula::Kind::Or: return naive_eval(f.subs[0], atoms, env) || naive_eval(f.subs[1], atoms, env);
    case FoFormula::Kind::Implies: return !naive_eval(f.subs[0], atoms, env) || naive_eval(f.subs[1], atoms, env);
    case FoFormula::Kind::Forall:
    case FoFormula::Kind::Exists: {
      const bool universal = f.kind == FoFormula::Kind::Forall;
      auto saved = env.find(f.var) == env.end() ? std::optional<BAElement>{} : std::optional<BAElement>{env[f.var]};
      bool result = universal;
      for (BAElement e = 0; e < (1U << atoms); ++e) {
        env[f.var] = e;
        if (naive_eval(f.subs[0], atoms, env) != universal) {
          result = !universal;
          break;
        }
      }
      if (saved) env[f.var] = *saved; else env.erase(f.var);
      return result;
    }
  }
  return false;
}

FoTerm v(const char* name) { return FoTerm::variable(name); }

}  // namespace

TEST_CASE("lattice laws in P(4)") {
  const FiniteBoolAlg b(4);
  for (auto x : b.elements()) {
    CHECK(b.meet(x, b.complement(x)) == b.bottom());
    CHECK(b.join(x, b.complement(x)) == b.top());
    for (auto y : b.elements()) {
      CHECK(b.complement(b.meet(x, y)) == b.join(b.complement(x), b.complement(y)));
      CHECK(b.leq(x, y) == (b.meet(x, y) == x));
    }
  }
  CHECK(b.elements().size() == 16);
  CHECK(FiniteBoolAlg(0).elements().size() == 1);
}

TEST_CASE("generate_subalgebra examples") {
  const FiniteBoolAlg p3(3);
  auto s = cwb::generate_subalgebra(p3, {});
  CHECK(s.algebra.atom_count() == 1);
  CHECK(s.atom_images == std::vector<BAElement>{0b111});

  s = cwb::generate_subalgebra(p3, {0b001});
  CHECK(s.algebra.atom_count() == 2);
  CHECK(s.atom_images == std::vector<BAElement>{0b001, 0b110});

  s = cwb::generate_subalgebra(p3, {0b001, 0b010, 0b100});
  CHECK(cwb::isomorphic(s, p3));

  const auto t = cwb::generate_subalgebra(FiniteBoolAlg(4), {0b0011});
  CHECK(cwb::stone_space(t).points == 2);
}

TEST_CASE("generated subalgebras are closed and minimal") {
  std::mt19937_64 rng(11);
  const FiniteBoolAlg p5(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BAElement> gens;
    for (std::size_t g = rng() % 3; g-- > 0;) gens.push_back(static_cast<BAElement>(rng() % 32));
    const auto s = cwb::generate_subalgebra(p5, gens);
    // Closure computed independently by saturation under the operations.
    std::set<BAElement> closure{0, p5.top()};
    closure.insert(gens.begin(), gens.end());
    for (bool grew = true; grew;) {
      grew = false;
      const std::vector<BAElement> snapshot(closure.begin(), closure.end());
      for (auto a : snapshot) {
        grew |= closure.insert(p5.complement(a)).second;
        for (auto c : snapshot) grew |= closure.insert(a & c).second;
      }
    }
    std::set<BAElement> image;
    for (auto e : s.algebra.elements()) image.insert(s.embed(e));
    CHECK(image == closure);
  }
}

TEST_CASE("Stone duality round trips for sizes <= 5") {
  for (std::size_t n = 0; n <= 5; ++n) {
    const FiniteBoolAlg b(n);
    CHECK(cwb::isomorphic(cwb::clopen_algebra(cwb::stone_space(b)), b));
    const FiniteSpace x{n};
    CHECK(cwb::stone_space(cwb::clopen_algebra(x)) == x);
  }
  CHECK_FALSE(cwb::isomorphic(FiniteBoolAlg(2), FiniteBoolAlg(3)));
}

TEST_CASE("dual morphism examples") {
  const auto id = cwb::dual_morphism(SpaceMap{FiniteSpace{3}, FiniteSpace{3}, {0, 1, 2}});
  for (BAElement c = 0; c < 8; ++c) CHECK(id.apply(c) == c);

  const auto collapse = cwb::dual_morphism(SpaceMap{FiniteSpace{3}, FiniteSpace{1}, {0, 0, 0}});
  CHECK(collapse.apply(1) == 0b111);
  CHECK(collapse.apply(0) == 0);

  const auto f = cwb::dual_morphism(SpaceMap{FiniteSpace{2}, FiniteSpace{2}, {0, 0}});
  CHECK(f.apply(0b10) == 0);
  CHECK_FALSE(f.is_injective());
  CHECK(f.preserves_operations());
}

TEST_CASE("dual morphisms: homomorphism, injectivity/surjectivity duality, functoriality") {
  std::mt19937_64 rng(2024);
  int compositions = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t a = 1 + rng() % 4, b = 1 + rng() % 4, c = 1 + rng() % 4;
    const SpaceMap f = random_map(rng, a, b);
    const SpaceMap g = random_map(rng, b, c);
    const auto df = cwb::dual_morphism(f);
    const auto dg = cwb::dual_morphism(g);
    REQUIRE(df.preserves_operations());
    CHECK(df.is_injective() == f.is_surjective());
    CHECK(df.is_surjective() == f.is_injective());
    // Contravariance: (g o f)^* = f^* o g^*.
    const auto lhs = cwb::dual_morphism(g.after(f));
    const auto rhs = df.after(dg);
    for (BAElement e = 0; e < (1U << c); ++e) REQUIRE(lhs.apply(e) == rhs.apply(e));
    CHECK(lhs == rhs);
    ++compositions;
  }
  CHECK(compositions == 100);
}

TEST_CASE("fo_eval examples") {
  const FiniteBoolAlg p3(3);
  const auto idem = FoFormula::forall("x", FoFormula::eq(FoTerm::meet(v("x"), v("x")), v("x")));
  CHECK(cwb::fo_eval(idem, p3));

  auto neq = [](FoTerm a, FoTerm b) { return FoFormula::negation(FoFormula::eq(std::move(a), std::move(b))); };
  const auto atom_exists = FoFormula::exists(
      "x", FoFormula::conj(FoFormula::conj(neq(v("x"), FoTerm::zero()), neq(v("x"), FoTerm::one())),
                           FoFormula::forall("y", FoFormula::implies(FoFormula::leq(v("y"), v("x")),
                                                                     FoFormula::disj(FoFormula::eq(v("y"), FoTerm::zero()),
                                                                                     FoFormula::eq(v("y"), v("x")))))));
  CHECK(cwb::fo_eval(atom_exists, p3));

  const auto two_disjoint = FoFormula::exists(
      "x", FoFormula::exists("y", FoFormula::conj(FoFormula::conj(FoFormula::eq(FoTerm::meet(v("x"), v("y")), FoTerm::zero()),
                                                                  neq(v("x"), FoTerm::zero())),
                                                  neq(v("y"), FoTerm::zero()))));
  CHECK_FALSE(cwb::fo_eval(two_disjoint, FiniteBoolAlg(1)));
  CHECK(cwb::fo_eval(two_disjoint, FiniteBoolAlg(2)));
}

TEST_CASE("fo_eval free variables and budget") {
  const auto phi = FoFormula::leq(v("x"), v("y"));
  CHECK(cwb::fo_eval(phi, FiniteBoolAlg(2), {{"x", 1}, {"y", 3}}));
  CHECK_FALSE(cwb::fo_eval(phi, FiniteBoolAlg(2), {{"x", 2}, {"y", 1}}));
  CHECK_THROWS_AS(cwb::fo_eval(phi, FiniteBoolAlg(2), {{"x", 1}}), cwb::PreconditionError);

  auto deep = FoFormula::eq(v("x"), v("x"));
  for (const char* name : {"x", "y", "z", "u", "v"}) deep = FoFormula::forall(name, deep);
  CHECK(cwb::fo_eval(deep, FiniteBoolAlg(4)));
  CHECK_THROWS_AS(cwb::fo_eval(deep, FiniteBoolAlg(5)), cwb::ResourceError);
}

TEST_CASE("fo_eval agrees with a naive evaluator on the seeded corpus") {
  const auto corpus = cwb::generate_sentences(200, 3, 7);
  REQUIRE(corpus.size() == 200);
  for (const auto& phi : corpus) {
    REQUIRE(phi.is_sentence());
    REQUIRE(phi.quantifier_rank() <= 3);
  }
  for (std::size_t n = 0; n <= 4; ++n) {
    const FiniteBoolAlg b(n);
    for (const auto& phi : corpus) {
      std::map<std::string, BAElement> env;
      INFO(cwb::to_string(phi));
      REQUIRE(cwb::fo_eval(phi, b) == naive_eval(phi, n, env));
    }
  }
}

TEST_CASE("corpus: parallel kernel matches serial reference") {
  const auto corpus = cwb::generate_sentences(300, 3, 99);
  for (std::size_t n = 0; n <= 5; ++n) {
    CHECK(cwb::fo_eval_corpus(corpus, FiniteBoolAlg(n), cwb::Exec::Serial) ==
          cwb::fo_eval_corpus(corpus, FiniteBoolAlg(n), cwb::Exec::Parallel));
  }
}

TEST_CASE("corpus is deterministic per seed and separates finite algebras") {
  CHECK(cwb::generate_sentences(50, 3, 5) == cwb::generate_sentences(50, 3, 5));
  CHECK_FALSE(cwb::generate_sentences(50, 3, 5) == cwb::generate_sentences(50, 3, 6));
  const auto corpus = cwb::generate_sentences(200, 3, 1);
  std::vector<std::vector<bool>> verdicts;
  for (std::size_t n = 0; n <= 4; ++n) verdicts.push_back(cwb::fo_eval_corpus(corpus, FiniteBoolAlg(n)));
  for (std::size_t m = 0; m <= 4; ++m) {
    for (std::size_t n = 0; n <= 4; ++n) CHECK((verdicts[m] == verdicts[n]) == (m == n));
  }
}
