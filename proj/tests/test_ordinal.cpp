#include <limits>
#include <stdexcept>
#include <vector>

#include "cwb/errors.hpp"
#include "cwb/ordinal.hpp"
#include "doctest.h"
#include "oracles/ordinal_oracle.hpp"

using cwb::Ordinal;

namespace {

Ordinal w() { return Ordinal::omega(); }
Ordinal n(std::uint64_t k) { return Ordinal(k); }
Ordinal wpow(const Ordinal& e, std::uint64_t c = 1) { return Ordinal::monomial(e, c); }

// All ordinals with exponents in {0, .., max_exp}, coefficients <= max_coeff.
std::vector<Ordinal> small_ordinals(std::uint64_t max_exp, std::uint64_t max_coeff) {
  std::vector<Ordinal> out{Ordinal{}};
  for (std::uint64_t e = max_exp + 1; e-- > 0;) {
    const std::size_t existing = out.size();
    for (std::size_t i = 0; i < existing; ++i) {
      for (std::uint64_t c = 1; c <= max_coeff; ++c) {
        out.push_back(cwb::add(out[i], wpow(n(e), c)));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("addition examples") {
  CHECK(cwb::add(w(), n(1)).to_string() == "w + 1");
  CHECK(cwb::add(n(1), w()) == w());
  const Ordinal w2 = wpow(n(2));
  CHECK(cwb::add(cwb::add(w2, w()), w2) == wpow(n(2), 2));
}

TEST_CASE("multiplication examples") {
  CHECK(cwb::mul(cwb::add(w(), n(1)), w()) == wpow(n(2)));
  CHECK(cwb::mul(w(), n(2)).to_string() == "w*2");
  CHECK(cwb::mul(n(2), w()) == w());
  CHECK(cwb::mul(Ordinal{}, w()).is_zero());
}

TEST_CASE("power examples and 0^0 convention") {
  CHECK(cwb::pow(Ordinal{}, Ordinal{}) == n(1));
  CHECK(cwb::pow(Ordinal{}, w()).is_zero());
  CHECK(cwb::pow(n(2), w()) == w());
  CHECK(cwb::pow(w(), w()).to_string() == "w^w");
  CHECK(cwb::pow(n(2), cwb::add(w(), n(3))) == wpow(n(1), 8));
  CHECK(cwb::pow(cwb::add(w(), n(1)), n(2)).to_string() == "w^2 + w + 1");
  CHECK(cwb::pow(w(), cwb::add(w(), n(1))).to_string() == "w^(w + 1)");
}

TEST_CASE("comparison examples") {
  CHECK(cwb::compare(Ordinal{}, Ordinal{}) == cwb::Comparison::Equal);
  CHECK(cwb::compare(w(), n(5)) == cwb::Comparison::Greater);
  const Ordinal big = cwb::add(cwb::add(wpow(n(2), 9), wpow(n(1), 9)), n(9));
  CHECK(cwb::compare(wpow(w()), big) == cwb::Comparison::Greater);
  CHECK(oracle::compare(oracle::normalize(oracle::from_ordinal(wpow(w()))),
                        oracle::normalize(oracle::from_ordinal(big))) > 0);
}

TEST_CASE("left subtraction") {
  CHECK(cwb::left_subtract(n(1), w()) == w());
  CHECK(cwb::left_subtract(cwb::add(w(), n(2)), wpow(n(1), 3)) == wpow(n(1), 2));
  CHECK_THROWS_AS(cwb::left_subtract(w(), n(3)), cwb::PreconditionError);
}

TEST_CASE("split modulo omega^omega") {
  const Ordinal ww = wpow(w());
  auto s = cwb::split_mod_omega_omega(cwb::add(cwb::add(wpow(w(), 2), wpow(n(2), 3)), n(5)));
  CHECK(s.quotient == n(2));
  CHECK(s.residue == cwb::add(wpow(n(2), 3), n(5)));

  s = cwb::split_mod_omega_omega(n(7));
  CHECK(s.quotient.is_zero());
  CHECK(s.residue == n(7));

  const Ordinal a = wpow(cwb::add(w(), n(1)));
  s = cwb::split_mod_omega_omega(a);
  CHECK(s.quotient == w());
  CHECK(s.residue.is_zero());
  CHECK(cwb::mul(ww, w()) == a);
}

TEST_CASE("split recombines") {
  const Ordinal ww = wpow(w());
  std::vector<Ordinal> samples = small_ordinals(2, 2);
  for (const auto& e : {w(), cwb::add(w(), n(1)), cwb::add(w(), n(2)), wpow(n(1), 2), cwb::mul(w(), w())}) {
    for (std::uint64_t c = 1; c <= 2; ++c) {
      samples.push_back(cwb::add(wpow(e, c), cwb::add(wpow(n(2)), n(3))));
    }
  }
  for (const auto& a : samples) {
    const auto s = cwb::split_mod_omega_omega(a);
    CHECK(cwb::add(cwb::mul(ww, s.quotient), s.residue) == a);
    CHECK(s.residue < ww);
  }
}

TEST_CASE("equivalence examples") {
  const Ordinal ww = wpow(w());
  CHECK(cwb::ordinal_equiv(cwb::add(ww, n(3)), cwb::add(wpow(w(), 5), n(3))));
  CHECK(cwb::ordinal_equiv(cwb::add(ww, w()), cwb::add(ww, w())));
  CHECK_FALSE(cwb::ordinal_equiv(n(3), cwb::add(ww, n(3))));
  CHECK(cwb::calkin_equiv(cwb::add(wpow(w(), 7), w()), cwb::add(ww, w())));
  CHECK_FALSE(cwb::calkin_equiv(n(1), n(2)));
  CHECK(cwb::calkin_equiv(ww, wpow(cwb::add(w(), n(1)))));
}

TEST_CASE("equivalence is an equivalence relation on samples") {
  const Ordinal ww = wpow(w());
  std::vector<Ordinal> samples;
  for (const auto& r : small_ordinals(2, 1)) {
    samples.push_back(r);
    samples.push_back(cwb::add(ww, r));
    samples.push_back(cwb::add(wpow(w(), 3), r));
    samples.push_back(cwb::add(wpow(cwb::add(w(), n(1))), r));
  }
  for (const auto& a : samples) {
    CHECK(cwb::ordinal_equiv(a, a));
    for (const auto& b : samples) {
      const bool ab = cwb::ordinal_equiv(a, b);
      REQUIRE(ab == cwb::ordinal_equiv(b, a));
      if (!ab) continue;
      for (const auto& c : samples) {
        if (cwb::ordinal_equiv(b, c)) REQUIRE(cwb::ordinal_equiv(a, c));
      }
    }
  }
}

TEST_CASE("arithmetic agrees with the order-construction oracle") {
  const auto ords = small_ordinals(2, 3);
  for (const auto& a : ords) {
    const auto wa = oracle::from_ordinal(a);
    for (const auto& b : ords) {
      const auto wb = oracle::from_ordinal(b);
      REQUIRE(oracle::same(oracle::from_ordinal(cwb::add(a, b)), oracle::add(wa, wb)));
      REQUIRE(oracle::same(oracle::from_ordinal(cwb::mul(a, b)), oracle::mul(wa, wb)));
      REQUIRE(oracle::same(oracle::from_ordinal(cwb::pow(a, b)), oracle::pow(wa, wb)));
      REQUIRE((oracle::compare(oracle::normalize(wa), oracle::normalize(wb)) < 0) == (a < b));
    }
  }
}

TEST_CASE("associativity and left distributivity (exhaustive, coefficients <= 3)") {
  // 64 ordinals below w^3; 64^3 triples.
  const auto ords = small_ordinals(2, 3);
  REQUIRE(ords.size() == 64);
  for (const auto& a : ords) {
    for (const auto& b : ords) {
      const Ordinal ab_sum = cwb::add(a, b);
      const Ordinal ab_prod = cwb::mul(a, b);
      for (const auto& c : ords) {
        REQUIRE(cwb::add(ab_sum, c) == cwb::add(a, cwb::add(b, c)));
        REQUIRE(cwb::mul(ab_prod, c) == cwb::mul(a, cwb::mul(b, c)));
        REQUIRE(cwb::mul(a, cwb::add(b, c)) == cwb::add(ab_prod, cwb::mul(a, c)));
      }
    }
  }
}

TEST_CASE("coefficient overflow is reported") {
  const Ordinal huge(std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(cwb::add(huge, n(1)), std::overflow_error);
}
