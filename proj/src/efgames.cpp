#include "cwb/efgames.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>

#include "cwb/errors.hpp"

namespace cwb::ef {

namespace {

template <typename T>
void normalize(std::vector<std::pair<T, T>>& gaps) {
  gaps.erase(std::remove_if(gaps.begin(), gaps.end(), [](const auto& p) { return p.first == p.second; }),
             gaps.end());
  std::sort(gaps.begin(), gaps.end());
  auto swapped = gaps;
  for (auto& p : swapped) std::swap(p.first, p.second);
  std::sort(swapped.begin(), swapped.end());
  if (swapped < gaps) gaps = std::move(swapped);
}

template <typename T>
bool has_empty_mismatch(const std::vector<std::pair<T, T>>& gaps) {
  const T zero{};
  return std::any_of(gaps.begin(), gaps.end(),
                     [&](const auto& p) { return (p.first == zero) != (p.second == zero); });
}

// Duplicator replies inside a gap of length h to Spoiler's split (t, g-1-t):
// the two mirror replies first, then everything else.
std::vector<std::uint32_t> reply_order(std::uint32_t g, std::uint32_t h, std::uint32_t t) {
  std::vector<std::uint32_t> out;
  out.reserve(h);
  if (t < h) out.push_back(t);
  const std::uint32_t from_right = g - 1 - t;
  if (from_right < h) {
    const std::uint32_t u = h - 1 - from_right;
    if (out.empty() || out.front() != u) out.push_back(u);
  }
  for (std::uint32_t u = 0; u < h; ++u) {
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
  }
  return out;
}

// delta with delta + x = gamma, if one exists.
std::optional<Ordinal> right_complement(const Ordinal& gamma, const Ordinal& x) {
  if (x.is_zero()) return gamma;
  const auto& xt = x.terms();
  const auto& gt = gamma.terms();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].exponent != xt.front().exponent) continue;
    if (gt[i].coefficient < xt.front().coefficient) return std::nullopt;
    if (gt.size() - i != xt.size()) return std::nullopt;
    if (!std::equal(xt.begin() + 1, xt.end(), gt.begin() + static_cast<std::ptrdiff_t>(i) + 1)) return std::nullopt;
    std::vector<OrdinalTerm> head(gt.begin(), gt.begin() + static_cast<std::ptrdiff_t>(i));
    const auto rest = gt[i].coefficient - xt.front().coefficient;
    if (rest > 0) head.push_back(OrdinalTerm{gt[i].exponent, rest});
    Ordinal delta = Ordinal::from_terms(head);
    if (add(delta, x) == gamma) return delta;
    return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t offsets_bound(int rounds) { return std::uint64_t{1} << std::max(0, rounds - 1); }

// Indices in [0, count) within `k` of either end.
std::vector<std::uint64_t> near_ends(std::uint64_t count, std::uint64_t k) {
  std::vector<std::uint64_t> out;
  if (count == 0) return out;
  for (std::uint64_t j = 0; j < count && j <= k; ++j) out.push_back(j);
  const std::uint64_t start = count - 1 > k ? count - 1 - k : 0;
  for (std::uint64_t j = std::max(start, k + 1); j < count; ++j) out.push_back(j);
  return out;
}

}  // namespace

// --- finite linear orders ---------------------------------------------------

bool FiniteOrderSolver::solve(std::size_t m, std::size_t n, int rank) {
  if (rank < 0 || rank > kMaxFiniteOrderRank) {
    throw ResourceError("finite order game rank " + std::to_string(rank) + " exceeds budget " +
                        std::to_string(kMaxFiniteOrderRank));
  }
  if (m > 4096 || n > 4096) throw ResourceError("finite order game size exceeds budget 4096");
  return duplicator_wins({{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(n)}}, rank);
}

bool FiniteOrderSolver::duplicator_wins(Gaps gaps, int rounds) {
  normalize(gaps);
  if (rounds == 0 || gaps.empty()) return true;
  if (has_empty_mismatch(gaps)) return false;
  if (rounds == 1) return true;
  auto key = std::make_pair(gaps, rounds);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  bool result = true;
  for (std::size_t i = 0; i < gaps.size() && result; ++i) {
    if (i > 0 && gaps[i] == gaps[i - 1]) continue;
    for (int side = 0; side < 2 && result; ++side) {
      const std::uint32_t g = side == 0 ? gaps[i].first : gaps[i].second;
      const std::uint32_t h = side == 0 ? gaps[i].second : gaps[i].first;
      // Splitting at t and at g-1-t are mirror images; the normal form
      // identifies them.
      for (std::uint32_t t = (g + 1) / 2; t-- > 0 && result;) {
        bool answered = false;
        for (std::uint32_t u : reply_order(g, h, t)) {
          Gaps next = gaps;
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
          if (side == 0) {
            next.emplace_back(t, u);
            next.emplace_back(g - 1 - t, h - 1 - u);
          } else {
            next.emplace_back(u, t);
            next.emplace_back(h - 1 - u, g - 1 - t);
          }
          if (duplicator_wins(std::move(next), rounds - 1)) {
            answered = true;
            break;
          }
        }
        if (!answered) result = false;
      }
    }
  }
  memo_.emplace(std::move(key), result);
  return result;
}

bool ef_finite_orders(std::size_t m, std::size_t n, int rank) {
  FiniteOrderSolver solver;
  return solver.solve(m, n, rank);
}

std::vector<std::vector<bool>> finite_order_table(std::size_t max_size, int rank, Exec exec) {
  std::vector<std::vector<char>> cells(max_size + 1, std::vector<char>(max_size + 1, 0));
  const auto rows = static_cast<std::ptrdiff_t>(max_size + 1);
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      FiniteOrderSolver solver;  // memo shared by the rows this thread takes
#pragma omp for schedule(dynamic, 1)
      for (std::ptrdiff_t m = 0; m < rows; ++m) {
        for (std::size_t n = 0; n <= max_size; ++n) {
          cells[static_cast<std::size_t>(m)][n] = solver.solve(static_cast<std::size_t>(m), n, rank) ? 1 : 0;
        }
      }
    }
  } else {
    FiniteOrderSolver solver;
    for (std::ptrdiff_t m = 0; m < rows; ++m) {
      for (std::size_t n = 0; n <= max_size; ++n) {
        cells[static_cast<std::size_t>(m)][n] = solver.solve(static_cast<std::size_t>(m), n, rank) ? 1 : 0;
      }
    }
  }
  std::vector<std::vector<bool>> table;
  table.reserve(cells.size());
  for (const auto& row : cells) table.emplace_back(row.begin(), row.end());
  return table;
}

// --- ordinals ---------------------------------------------------------------

std::vector<Ordinal> OrdinalGameSolver::candidate_points(const Ordinal& gap, int rounds) {
  const std::uint64_t k_fin = offsets_bound(rounds);
  const std::uint64_t k_blocks = static_cast<std::uint64_t>(std::max(1, rounds));
  std::set<Ordinal> points;
  auto insert = [&](Ordinal p) {
    points.insert(std::move(p));
    if (points.size() > kMaxOrdinalCandidates) {
      throw ResourceError("ordinal game candidate set exceeds budget " + std::to_string(kMaxOrdinalCandidates));
    }
  };

  Ordinal prefix;
  for (const auto& term : gap.terms()) {
    if (term.exponent.is_zero()) {
      for (auto j : near_ends(term.coefficient, k_fin)) insert(add(prefix, Ordinal(j)));
    } else {
      // eta < omega^e: short finite offsets, or omega^f * k + j for f a
      // candidate point of the exponent itself.
      std::vector<Ordinal> below;
      for (std::uint64_t j = 0; j <= k_fin; ++j) below.emplace_back(j);
      for (const auto& f : candidate_points(term.exponent, rounds)) {
        if (f.is_zero()) continue;
        for (std::uint64_t k = 1; k <= k_blocks; ++k) {
          for (std::uint64_t j = 0; j <= k_fin; ++j) below.push_back(add(Ordinal::monomial(f, k), Ordinal(j)));
        }
      }
      for (auto d : near_ends(term.coefficient, k_blocks)) {
        const Ordinal base = add(prefix, Ordinal::monomial(term.exponent, d));
        for (const auto& eta : below) insert(add(base, eta));
      }
    }
    prefix = add(prefix, Ordinal::monomial(term.exponent, term.coefficient));
  }
  return {points.begin(), points.end()};
}

bool OrdinalGameSolver::solve(const Ordinal& a, const Ordinal& b, int rank) {
  if (rank < 0 || rank > kMaxOrdinalRank) {
    throw ResourceError("ordinal game rank " + std::to_string(rank) + " exceeds budget " +
                        std::to_string(kMaxOrdinalRank));
  }
  for (const auto* x : {&a, &b}) {
    if (!split_mod_omega_omega(*x).quotient.is_finite()) {
      throw PreconditionError("ordinal game requires ordinals below w^w*w, got " + x->to_string());
    }
  }
  return duplicator_wins({{intern(a), intern(b)}}, rank);
}

std::size_t OrdinalGameSolver::KeyHash::operator()(const std::pair<Gaps, int>& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.second);
  for (const auto& [a, b] : k.first) {
    h = (h ^ (std::uint64_t{a} << 32 | b)) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

OrdinalGameSolver::Id OrdinalGameSolver::intern(const Ordinal& a) {
  auto [it, inserted] = ids_.emplace(a, static_cast<Id>(ordinals_.size()));
  if (inserted) {
    ordinals_.push_back(a);
    // Which (left empty, right empty) splits the gap admits; two gaps with
    // the same signature are equivalent for the last two rounds.
    int sig = 4;  // limit: (1,0), (0,0)
    if (a.is_finite() && a.finite_value() <= 2) {
      sig = static_cast<int>(a.finite_value());  // 1: (1,1); 2: (1,0), (0,1)
    } else if (a.is_successor()) {
      sig = 3;  // (1,0), (0,1), (0,0)
    }
    signatures_.push_back(sig);
  }
  return it->second;
}

// Splitting gap gamma at delta leaves delta below and the remainder
// (delta + 1) + right = gamma above.
const std::vector<OrdinalGameSolver::Split>& OrdinalGameSolver::moves(Id gap, int rounds) {
  auto key = std::make_pair(gap, rounds);
  if (auto it = moves_.find(key); it != moves_.end()) return it->second;
  const Ordinal gamma = ordinals_[gap];
  std::vector<Split> out;
  for (const auto& delta : candidate_points(gamma, rounds)) {
    out.push_back(Split{intern(delta), intern(left_subtract(add(delta, Ordinal(1)), gamma))});
  }
  return moves_.emplace(key, std::move(out)).first->second;
}

std::optional<OrdinalGameSolver::Split> OrdinalGameSolver::split_with_left(Id gap, Id left) {
  const std::uint64_t key = std::uint64_t{gap} << 32 | left;
  if (auto it = by_left_.find(key); it != by_left_.end()) return it->second;
  std::optional<Split> out;
  const Ordinal delta = ordinals_[left];
  const Ordinal gamma = ordinals_[gap];
  if (delta < gamma) out = Split{left, intern(left_subtract(add(delta, Ordinal(1)), gamma))};
  by_left_.emplace(key, out);
  return out;
}

std::optional<OrdinalGameSolver::Split> OrdinalGameSolver::split_with_right(Id gap, Id right) {
  const std::uint64_t key = std::uint64_t{gap} << 32 | right;
  if (auto it = by_right_.find(key); it != by_right_.end()) return it->second;
  std::optional<Split> out;
  if (auto d = right_complement(ordinals_[gap], add(Ordinal(1), ordinals_[right]))) out = Split{intern(*d), right};
  by_right_.emplace(key, out);
  return out;
}

bool OrdinalGameSolver::duplicator_wins(Gaps gaps, int rounds) {
  normalize(gaps);
  if (rounds == 0 || gaps.empty()) return true;
  if (has_empty_mismatch(gaps)) return false;
  if (rounds == 1) return true;
  if (rounds == 2) {
    return std::all_of(gaps.begin(), gaps.end(),
                       [&](const auto& p) { return signature(p.first) == signature(p.second); });
  }
  auto key = std::make_pair(gaps, rounds);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  bool result = true;
  for (std::size_t i = 0; i < gaps.size() && result; ++i) {
    if (i > 0 && gaps[i] == gaps[i - 1]) continue;
    for (int side = 0; side < 2 && result; ++side) {
      const Id g = side == 0 ? gaps[i].first : gaps[i].second;
      const Id h = side == 0 ? gaps[i].second : gaps[i].first;
      // Copies: the move tables may grow (and rehash) during recursion.
      const auto spoiler_moves = moves(g, rounds);
      const auto base_replies = moves(h, rounds);
      for (const auto& move : spoiler_moves) {
        std::vector<Split> replies;
        if (auto r = split_with_left(h, move.left)) replies.push_back(*r);
        if (auto r = split_with_right(h, move.right)) replies.push_back(*r);
        replies.insert(replies.end(), base_replies.begin(), base_replies.end());

        bool answered = false;
        for (const auto& reply : replies) {
          Gaps next = gaps;
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
          if (side == 0) {
            next.emplace_back(move.left, reply.left);
            next.emplace_back(move.right, reply.right);
          } else {
            next.emplace_back(reply.left, move.left);
            next.emplace_back(reply.right, move.right);
          }
          if (duplicator_wins(std::move(next), rounds - 1)) {
            answered = true;
            break;
          }
        }
        if (!answered) {
          result = false;
          break;
        }
      }
    }
  }
  memo_.emplace(std::move(key), result);
  return result;
}

bool ef_ordinals(const Ordinal& a, const Ordinal& b, int rank) {
  OrdinalGameSolver solver;
  return solver.solve(a, b, rank);
}

// --- finite Boolean algebras ------------------------------------------------

bool BoolAlgSolver::solve(const FiniteBoolAlg& a, const FiniteBoolAlg& b, int rank) {
  if (rank < 0 || rank > kMaxBoolRank) {
    throw ResourceError("Boolean algebra game rank " + std::to_string(rank) + " exceeds budget " +
                        std::to_string(kMaxBoolRank));
  }
  if (a.atom_count() > kMaxBoolAtoms || b.atom_count() > kMaxBoolAtoms) {
    throw ResourceError("Boolean algebra game limited to 5 atoms per side");
  }
  if (!(a_ == a) || !(b_ == b)) memo_.clear();
  a_ = a;
  b_ = b;
  return duplicator_wins(GamePosition{{}, {}, rank});
}

namespace {

// Cells of the partition cut out by the tuple: cell s is the meet over i of
// tuple[i] or its complement according to bit i of s.
std::vector<BAElement> cells(const FiniteBoolAlg& alg, const std::vector<BAElement>& tuple) {
  std::vector<BAElement> out(std::size_t{1} << tuple.size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    BAElement c = alg.top();
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      c &= (s >> i & 1U) ? tuple[i] : alg.complement(tuple[i]);
    }
    out[s] = c;
  }
  return out;
}

// Elements that are interchangeable by an automorphism fixing the tuple have
// the same intersection sizes with every cell; keep one per class.
std::vector<BAElement> representatives(const FiniteBoolAlg& alg, const std::vector<BAElement>& tuple) {
  const auto cs = cells(alg, tuple);
  std::set<std::vector<int>> seen;
  std::vector<BAElement> out;
  for (auto e : alg.elements()) {
    std::vector<int> profile;
    profile.reserve(cs.size());
    for (auto c : cs) profile.push_back(std::popcount(e & c));
    if (seen.insert(profile).second) out.push_back(e);
  }
  return out;
}

}  // namespace

bool BoolAlgSolver::partial_isomorphism(const GamePosition& pos) const {
  const auto ca = cells(a_, pos.left);
  const auto cb = cells(b_, pos.right);
  for (std::size_t s = 0; s < ca.size(); ++s) {
    if ((ca[s] == 0) != (cb[s] == 0)) return false;
  }
  return true;
}

std::vector<std::uint32_t> BoolAlgSolver::key(const GamePosition& pos) const {
  std::vector<std::uint32_t> k{static_cast<std::uint32_t>(pos.rounds_remaining)};
  for (auto c : cells(a_, pos.left)) k.push_back(static_cast<std::uint32_t>(std::popcount(c)));
  k.push_back(0xffffffffU);
  for (auto c : cells(b_, pos.right)) k.push_back(static_cast<std::uint32_t>(std::popcount(c)));
  return k;
}

bool BoolAlgSolver::duplicator_wins(const GamePosition& pos) {
  if (!partial_isomorphism(pos)) return false;
  if (pos.rounds_remaining == 0) return true;
  auto k = key(pos);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;

  bool result = true;
  for (int side = 0; side < 2 && result; ++side) {
    const auto& spoiler_alg = side == 0 ? a_ : b_;
    const auto& dup_alg = side == 0 ? b_ : a_;
    const auto& spoiler_tuple = side == 0 ? pos.left : pos.right;
    const auto& dup_tuple = side == 0 ? pos.right : pos.left;
    for (auto e : representatives(spoiler_alg, spoiler_tuple)) {
      bool answered = false;
      for (auto f : representatives(dup_alg, dup_tuple)) {
        GamePosition next = pos;
        --next.rounds_remaining;
        (side == 0 ? next.left : next.right).push_back(e);
        (side == 0 ? next.right : next.left).push_back(f);
        if (duplicator_wins(next)) {
          answered = true;
          break;
        }
      }
      if (!answered) {
        result = false;
        break;
      }
    }
  }
  memo_.emplace(std::move(k), result);
  return result;
}

bool ef_finite_bas(const FiniteBoolAlg& a, const FiniteBoolAlg& b, int rank) {
  BoolAlgSolver solver;
  return solver.solve(a, b, rank);
}

}  // namespace cwb::ef
