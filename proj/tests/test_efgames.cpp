#include <cstdint>
#include <vector>

#include "cwb/efgames.hpp"
#include "cwb/errors.hpp"
#include "cwb/fo.hpp"
#include "doctest.h"

using cwb::Ordinal;
namespace ef = cwb::ef;

namespace {

Ordinal w() { return Ordinal::omega(); }
Ordinal n(std::uint64_t k) { return Ordinal(k); }
Ordinal wpow(const Ordinal& e, std::uint64_t c = 1) { return Ordinal::monomial(e, c); }

bool closed_form(std::size_t m, std::size_t k, int r) {
  const std::size_t threshold = (std::size_t{1} << r) - 1;
  return m == k || (m >= threshold && k >= threshold);
}

}  // namespace

TEST_CASE("finite order examples") {
  CHECK(ef::ef_finite_orders(3, 3, 5));
  CHECK_FALSE(ef::ef_finite_orders(2, 3, 2));
  CHECK(ef::ef_finite_orders(7, 12, 3));
  CHECK_FALSE(ef::ef_finite_orders(6, 12, 3));
  CHECK(ef::ef_finite_orders(0, 0, 3));
  CHECK_FALSE(ef::ef_finite_orders(0, 1, 1));
}

TEST_CASE("finite order closed form, m, n <= 40, r <= 5") {
  ef::FiniteOrderSolver solver;
  for (int r = 0; r <= 5; ++r) {
    for (std::size_t m = 0; m <= 40; ++m) {
      for (std::size_t k = 0; k <= 40; ++k) {
        INFO("m=" << m << " n=" << k << " r=" << r);
        REQUIRE(solver.solve(m, k, r) == closed_form(m, k, r));
      }
    }
  }
}

TEST_CASE("finite order monotonicity in rank") {
  ef::FiniteOrderSolver solver;
  for (std::size_t m = 0; m <= 20; ++m) {
    for (std::size_t k = 0; k <= 20; ++k) {
      for (int r = 0; r < 5; ++r) {
        if (solver.solve(m, k, r + 1)) REQUIRE(solver.solve(m, k, r));
      }
    }
  }
}

TEST_CASE("finite order table: parallel kernel matches serial reference") {
  const auto serial = ef::finite_order_table(24, 4, cwb::Exec::Serial);
  const auto parallel = ef::finite_order_table(24, 4, cwb::Exec::Parallel);
  CHECK(serial == parallel);
  CHECK(serial[15][24]);
  CHECK_FALSE(serial[14][24]);
}

TEST_CASE("budgets fail loudly") {
  CHECK_THROWS_AS(ef::ef_finite_orders(3, 3, 7), cwb::ResourceError);
  CHECK_THROWS_AS(ef::ef_finite_orders(5000, 3, 2), cwb::ResourceError);
  CHECK_THROWS_AS(ef::ef_ordinals(w(), w(), 5), cwb::ResourceError);
  CHECK_THROWS_AS(ef::ef_ordinals(wpow(cwb::add(w(), n(1))), w(), 2), cwb::PreconditionError);
  CHECK_THROWS_AS(ef::ef_finite_bas(cwb::FiniteBoolAlg(6), cwb::FiniteBoolAlg(2), 1), cwb::ResourceError);
  CHECK_THROWS_AS(ef::ef_finite_bas(cwb::FiniteBoolAlg(2), cwb::FiniteBoolAlg(2), 4), cwb::ResourceError);
}

TEST_CASE("ordinal game examples") {
  CHECK(ef::ef_ordinals(w(), w(), 4));
  CHECK(ef::ef_ordinals(w(), cwb::mul(w(), n(2)), 1));
  CHECK(ef::ef_ordinals(w(), cwb::mul(w(), n(2)), 2));
  CHECK_FALSE(ef::ef_ordinals(w(), cwb::mul(w(), n(2)), 3));
  // A last element is a rank-2 property.
  CHECK(ef::ef_ordinals(w(), cwb::add(w(), n(1)), 1));
  CHECK_FALSE(ef::ef_ordinals(w(), cwb::add(w(), n(1)), 2));
  CHECK(ef::ef_ordinals(n(7), w(), 1));
  CHECK_FALSE(ef::ef_ordinals(n(7), w(), 2));
}

TEST_CASE("ordinal game on w^w multiples") {
  const Ordinal ww = wpow(w());
  for (int r = 1; r <= 3; ++r) {
    CHECK(ef::ef_ordinals(cwb::add(ww, n(3)), cwb::add(wpow(w(), 5), n(3)), r));
    CHECK(ef::ef_ordinals(cwb::add(ww, w()), cwb::add(wpow(w(), 2), w()), r));
  }
  CHECK_FALSE(ef::ef_ordinals(cwb::add(ww, n(3)), cwb::add(ww, n(4)), 3));
}

TEST_CASE("ordinal game agrees with the finite-order solver on finite orders") {
  ef::FiniteOrderSolver finite;
  for (int r = 0; r <= 4; ++r) {
    ef::OrdinalGameSolver ordinal;
    for (std::uint64_t m = 0; m <= 40; ++m) {
      for (std::uint64_t k = 0; k <= 40; ++k) {
        INFO("m=" << m << " n=" << k << " r=" << r);
        REQUIRE(ordinal.solve(n(m), n(k), r) == finite.solve(m, k, r));
      }
    }
  }
}

TEST_CASE("ordinal game monotonicity on ordinals below w^2") {
  std::vector<Ordinal> ords;
  for (std::uint64_t a = 0; a <= 3; ++a) {
    for (std::uint64_t b = 0; b <= 3; ++b) ords.push_back(cwb::add(cwb::mul(w(), n(a)), n(b)));
  }
  ef::OrdinalGameSolver solver;
  for (const auto& a : ords) {
    for (const auto& b : ords) {
      for (int r = 0; r < 4; ++r) {
        if (solver.solve(a, b, r + 1)) REQUIRE(solver.solve(a, b, r));
      }
      if (a == b) REQUIRE(solver.solve(a, b, 4));
    }
  }
}

TEST_CASE("candidate points are inside the gap") {
  const Ordinal g = cwb::add(cwb::add(wpow(w(), 2), wpow(n(2), 3)), n(5));
  for (int r = 1; r <= 4; ++r) {
    const auto pts = ef::OrdinalGameSolver::candidate_points(g, r);
    CHECK_FALSE(pts.empty());
    for (const auto& p : pts) REQUIRE(p < g);
  }
  CHECK(ef::OrdinalGameSolver::candidate_points(Ordinal{}, 3).empty());
}

TEST_CASE("Boolean algebra game examples") {
  using cwb::FiniteBoolAlg;
  CHECK(ef::ef_finite_bas(FiniteBoolAlg(3), FiniteBoolAlg(3), 3));
  CHECK_FALSE(ef::ef_finite_bas(FiniteBoolAlg(2), FiniteBoolAlg(3), 2));
  CHECK(ef::ef_finite_bas(FiniteBoolAlg(4), FiniteBoolAlg(5), 1));
  CHECK_FALSE(ef::ef_finite_bas(FiniteBoolAlg(0), FiniteBoolAlg(1), 0));
}

TEST_CASE("Boolean algebra game: monotone, and implies corpus agreement") {
  using cwb::FiniteBoolAlg;
  const auto corpus = cwb::generate_sentences(300, 3, 2024);
  std::vector<std::vector<bool>> verdicts;
  for (std::size_t m = 0; m <= 5; ++m) verdicts.push_back(cwb::fo_eval_corpus(corpus, FiniteBoolAlg(m), cwb::Exec::Serial));

  for (std::size_t m = 0; m <= 5; ++m) {
    for (std::size_t k = 0; k <= 5; ++k) {
      ef::BoolAlgSolver solver;
      bool previous = true;
      for (int r = 0; r <= 3; ++r) {
        const bool eq = solver.solve(FiniteBoolAlg(m), FiniteBoolAlg(k), r);
        if (eq) REQUIRE(previous);
        previous = eq;
        if (!eq) continue;
        for (std::size_t s = 0; s < corpus.size(); ++s) {
          if (corpus[s].quantifier_rank() > r) continue;
          INFO("m=" << m << " n=" << k << " r=" << r << " sentence " << cwb::to_string(corpus[s]));
          REQUIRE(verdicts[m][s] == verdicts[k][s]);
        }
      }
      if (m == k) CHECK(previous);
    }
  }
}
