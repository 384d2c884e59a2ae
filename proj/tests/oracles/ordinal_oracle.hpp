#pragma once

// Order-construction oracle for ordinal arithmetic, independent of the CNF
// coefficient rules in src/ordinal.cpp.
//
// An ordinal is presented as a finite concatenation of blocks omega^L, each
// letter L itself presented the same way. Sums are concatenations of orders.
// The order type of a presentation is read off by absorption: a block is
// swallowed by any later, strictly longer block. Products and powers are
// built from the order-theoretic identities
//   a * 1 = a,   a * omega^L = omega^(m + L)          (m = longest block of a)
//   n^(omega^L) = omega^(omega^(L - 1)),  a^(omega^L) = omega^(m * omega^L)
// where L - 1 is the x with 1 + x = L. Only Ordinal -> presentation
// conversion touches the implementation, and that conversion just expands
// each term into `coefficient` copies of its block.

#include <compare>
#include <vector>

#include "cwb/ordinal.hpp"

namespace oracle {

struct Word {
  std::vector<Word> letters;
};

std::strong_ordering compare(const Word& a, const Word& b);

inline Word normalize(const Word& w) {
  std::vector<Word> letters;
  letters.reserve(w.letters.size());
  for (const auto& l : w.letters) letters.push_back(normalize(l));
  std::vector<Word> kept;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = i + 1; j < letters.size() && !absorbed; ++j) {
      absorbed = compare(letters[j], letters[i]) > 0;
    }
    if (!absorbed) kept.push_back(letters[i]);
  }
  return Word{kept};
}

// Compares normalized presentations (letters non-increasing).
inline std::strong_ordering compare(const Word& a, const Word& b) {
  const std::size_t n = std::min(a.letters.size(), b.letters.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a.letters[i], b.letters[i]); c != 0) return c;
  }
  return a.letters.size() <=> b.letters.size();
}

inline bool same(const Word& a, const Word& b) { return compare(normalize(a), normalize(b)) == 0; }

inline Word finite(std::size_t n) { return Word{std::vector<Word>(n, Word{})}; }
inline Word block(const Word& exponent) { return Word{{exponent}}; }

inline bool is_zero(const Word& w) { return normalize(w).letters.empty(); }
inline bool is_finite(const Word& w) {
  for (const auto& l : normalize(w).letters) {
    if (!is_zero(l)) return false;
  }
  return true;
}

inline Word from_ordinal(const cwb::Ordinal& a) {
  Word w;
  for (const auto& t : a.terms()) {
    const Word letter = from_ordinal(t.exponent);
    for (std::uint64_t i = 0; i < t.coefficient; ++i) w.letters.push_back(letter);
  }
  return w;
}

inline Word add(const Word& a, const Word& b) {
  Word r = a;
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return r;
}

inline Word mul(const Word& a0, const Word& b0) {
  const Word a = normalize(a0);
  const Word b = normalize(b0);
  if (a.letters.empty() || b.letters.empty()) return Word{};
  const Word& longest = a.letters.front();
  Word r;
  for (const auto& l : b.letters) {
    if (is_zero(l)) {
      r = add(r, a);
    } else {
      r.letters.push_back(add(longest, l));
    }
  }
  return normalize(r);
}

inline Word pow(const Word& a0, const Word& b0) {
  const Word a = normalize(a0);
  const Word b = normalize(b0);
  if (b.letters.empty()) return finite(1);
  if (a.letters.empty()) return Word{};
  if (same(a, finite(1))) return finite(1);
  Word r = finite(1);
  for (const auto& l : b.letters) {
    Word factor;
    if (is_zero(l)) {
      factor = a;
    } else if (is_finite(a)) {
      Word pred = normalize(l);
      if (is_finite(pred)) pred.letters.pop_back();
      factor = block(block(pred));
    } else {
      factor = block(mul(a.letters.front(), block(l)));
    }
    r = mul(r, factor);
  }
  return normalize(r);
}

}  // namespace oracle
