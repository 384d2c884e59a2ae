#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cwb/boolalg.hpp"
#include "cwb/exec.hpp"
#include "cwb/ordinal.hpp"

// Ehrenfeucht-Fraisse game solvers. These are brute-force oracles used to
// cross-check the equivalence decisions of the ordinal and Boolean modules.
// Every solver fails loudly (ResourceError) past its budget.
namespace cwb::ef {

inline constexpr int kMaxFiniteOrderRank = 6;
inline constexpr int kMaxOrdinalRank = 4;
inline constexpr int kMaxBoolRank = 3;
inline constexpr std::size_t kMaxBoolAtoms = 5;
inline constexpr std::size_t kMaxOrdinalCandidates = 4096;

// Matched element tuples of a partially played game.
struct GamePosition {
  std::vector<BAElement> left;
  std::vector<BAElement> right;
  int rounds_remaining = 0;
};

// Game on finite linear orders. A position is the list of gap pairs left by
// the pebbles; the memo key is that list sorted, with identical pairs dropped
// (Duplicator copies inside them) and the sides swapped into a fixed order.
class FiniteOrderSolver {
public:
  bool solve(std::size_t m, std::size_t n, int rank);
  std::size_t memo_size() const { return memo_.size(); }

private:
  using Gaps = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  bool duplicator_wins(Gaps gaps, int rounds);

  std::map<std::pair<Gaps, int>, bool> memo_;
};

// Game on ordinals below omega^omega * omega, played on gap pairs of
// ordinals. Moves range over a canonical finite set of split points per gap;
// Duplicator additionally gets the two mirror replies to Spoiler's move.
// Ordinals are interned so positions and memo keys are small integer
// vectors; one solver can be reused across many queries.
class OrdinalGameSolver {
public:
  bool solve(const Ordinal& a, const Ordinal& b, int rank);

  // Split points offered in gap `gap` when `rounds` rounds remain.
  static std::vector<Ordinal> candidate_points(const Ordinal& gap, int rounds);

private:
  using Id = std::uint32_t;
  using Gaps = std::vector<std::pair<Id, Id>>;
  struct Split {
    Id left;
    Id right;
  };

  struct KeyHash {
    std::size_t operator()(const std::pair<Gaps, int>& k) const;
  };

  Id intern(const Ordinal& a);
  int signature(Id gap) const { return signatures_[gap]; }
  const std::vector<Split>& moves(Id gap, int rounds);
  std::optional<Split> split_with_left(Id gap, Id left);
  std::optional<Split> split_with_right(Id gap, Id right);
  bool duplicator_wins(Gaps gaps, int rounds);

  std::vector<Ordinal> ordinals_{Ordinal{}};
  std::vector<int> signatures_{0};
  std::map<Ordinal, Id> ids_{{Ordinal{}, 0}};
  std::map<std::pair<Id, int>, std::vector<Split>> moves_;
  std::unordered_map<std::uint64_t, std::optional<Split>> by_left_;
  std::unordered_map<std::uint64_t, std::optional<Split>> by_right_;
  std::unordered_map<std::pair<Gaps, int>, bool, KeyHash> memo_;
};

// Game on finite Boolean algebras with moves over all elements. Positions are
// normalized by the sizes of the cells cut out by the played elements.
class BoolAlgSolver {
public:
  bool solve(const FiniteBoolAlg& a, const FiniteBoolAlg& b, int rank);

private:
  bool duplicator_wins(const GamePosition& pos);
  bool partial_isomorphism(const GamePosition& pos) const;
  std::vector<std::uint32_t> key(const GamePosition& pos) const;

  FiniteBoolAlg a_;
  FiniteBoolAlg b_;
  std::map<std::vector<std::uint32_t>, bool> memo_;
};

bool ef_finite_orders(std::size_t m, std::size_t n, int rank);
bool ef_ordinals(const Ordinal& a, const Ordinal& b, int rank);
bool ef_finite_bas(const FiniteBoolAlg& a, const FiniteBoolAlg& b, int rank);

// table[m][n] = ef_finite_orders(m, n, rank) for m, n <= max_size. The
// parallel kernel gives each thread its own solver.
std::vector<std::vector<bool>> finite_order_table(std::size_t max_size, int rank, Exec exec = Exec::Parallel);

}  // namespace cwb::ef
