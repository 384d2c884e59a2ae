#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwb/boolalg.hpp"
#include "cwb/cstar.hpp"
#include "cwb/exec.hpp"

namespace cwb {

// --- the clopen algebra of 2^omega ------------------------------------------

// A clopen subset of {0,1}^omega, stored as the set of words of length
// `depth` whose cylinders it contains. Canonical: depth is minimal, so no two
// sibling cells agree at the last level. Bit x0 is the most significant bit
// of a cell index.
class CylinderSet {
public:
  static constexpr unsigned kMaxDepth = 20;

  static CylinderSet bottom() { return CylinderSet(0, {false}); }
  static CylinderSet top() { return CylinderSet(0, {true}); }
  // The cylinder of all sequences starting with `prefix` (a word over {0,1}).
  static CylinderSet cylinder(const std::string& prefix);
  static CylinderSet from_cells(unsigned depth, std::vector<bool> cells);

  unsigned depth() const { return depth_; }
  const std::vector<bool>& cells() const { return cells_; }
  bool is_zero() const { return !cells_[0] && depth_ == 0; }
  bool is_top() const { return cells_[0] && depth_ == 0; }

  CylinderSet meet(const CylinderSet& o) const;
  CylinderSet join(const CylinderSet& o) const;
  CylinderSet complement() const;
  CylinderSet minus(const CylinderSet& o) const { return meet(o.complement()); }
  bool leq(const CylinderSet& o) const { return meet(o) == *this; }
  bool strictly_below(const CylinderSet& o) const { return leq(o) && !(*this == o); }

  // Cells at the given depth (>= depth()).
  std::vector<bool> cells_at(unsigned depth) const;

  // Minimal decomposition into disjoint cylinders, in lexicographic order of
  // their prefixes. "top" and "bot" for the extremes, else "p1 | p2 | ...".
  std::vector<std::string> prefixes() const;
  std::string to_string() const;

  friend bool operator==(const CylinderSet&, const CylinderSet&) = default;

private:
  CylinderSet(unsigned depth, std::vector<bool> cells) : depth_(depth), cells_(std::move(cells)) {}
  void canonicalize();

  unsigned depth_ = 0;
  std::vector<bool> cells_;
};

// Tag for the countable atomless Boolean algebra presented by CylinderSet.
struct PresentedAtomlessBA {};

// c with max(Y) < c < min(Z), where Y ascends and Z descends (empty Y means
// bottom, empty Z top). Throws PreconditionError unless both are chains and
// max(Y) < min(Z). In the atomless algebra an interpolant always exists: the
// lexicographically first cell of min(Z) - max(Y) at its canonical depth is
// split and its 0-half added to max(Y).
CylinderSet interpolate_chain(const std::vector<CylinderSet>& Y, const std::vector<CylinderSet>& Z,
                              PresentedAtomlessBA);
// In P(n): nullopt (NotFound) iff min(Z) - max(Y) is a single atom. Otherwise
// the lowest atom of the difference is added to max(Y).
std::optional<BAElement> interpolate_chain(const std::vector<BAElement>& Y, const std::vector<BAElement>& Z,
                                           const FiniteBoolAlg& b);

// Seeded strict chains Y < Z of total length <= 6 in the atomless algebra.
struct ChainInstance {
  std::vector<CylinderSet> Y;
  std::vector<CylinderSet> Z;
};
std::vector<ChainInstance> generate_chains(std::size_t count, std::uint64_t seed);

// --- degree-1 types in C(X) -------------------------------------------------

struct LinearTerm {
  std::size_t var = 0;
  bool star = false;  // coefficient * x_var^*
  CElement coefficient;
};

// P(x) = constant + sum of coefficient * x_j or coefficient * x_j^*.
struct DegreeOnePolynomial {
  CElement constant;
  std::vector<LinearTerm> terms;

  CElement evaluate(const std::vector<CElement>& x) const;
};

struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// ||P(x)|| in the union of the target intervals (0 <= lo <= hi).
struct TypeCondition {
  DegreeOnePolynomial polynomial;
  std::vector<ClosedInterval> target;

  double distance(double value) const;
};

struct RealizeResult {
  enum class Status { Realized, Unsatisfiable, Inconclusive };

  Status status = Status::Inconclusive;
  std::vector<CElement> assignment;  // Realized: one unit-ball element per variable
  double violation = 0.0;            // Realized: max distance of ||P_n|| from K_n
  double certified_violation = 0.0;  // Realized: upper end of the clogic enclosure
  double epsilon = 0.0;              // Unsatisfiable: no assignment gets violation < epsilon
  std::vector<std::size_t> delta;    // Unsatisfiable: conditions used by the refutation
  double lower_bound = 0.0;          // best proven lower bound on the minimal violation
  double upper_bound = 0.0;          // best violation found
  std::uint64_t boxes = 0;
};

inline constexpr std::size_t kMaxTypeVariables = 3;
inline constexpr std::size_t kMaxTypePoints = 4;
inline constexpr std::size_t kMaxTypeConditions = 16;
inline constexpr std::uint64_t kRealizeBoxBudget = 400'000;

// Branch and bound over the unit polydisc of the variables, minimizing the
// worst violation. Realized once a sample point has violation <= tol/2 and
// the clogic certificate is <= tol. Unsatisfiable once the proven lower bound
// is positive and at least half the best violation found. Budget exhaustion
// gives Inconclusive, never Unsatisfiable.
RealizeResult realize_type(const std::vector<TypeCondition>& conditions, const CStarAlgebraFin& a, double tol,
                           Exec exec = Exec::Parallel, std::uint64_t budget = kRealizeBoxBudget);

// The instances used by tests, acceptance and the CLI.
// {||x|| = 1} together with {||x e_i|| = 0} for every indicator e_i of X.
std::vector<TypeCondition> orthogonality_type(std::size_t points);
// The chain b_n = e_0 + ... + e_n of C(points) with supremum b = 1:
// ||x|| = 1, ||b - x|| in [1, 2], ||b - x - 1|| = 1, ||x - b_n - 1|| in [0, 1].
std::vector<TypeCondition> rickart_type(std::size_t points);

// --- orthogonal families ----------------------------------------------------

struct OrthogonalFamily {
  std::size_t size = 0;
  std::vector<CElement> witness;  // pairwise orthogonal, positive, norm 1
};

// Positive norm-one pairwise orthogonal elements have disjoint nonempty
// supports, so the maximum is |X|; the indicator family attains it. The
// witness is checked before returning. Requires |X| <= 8.
OrthogonalFamily max_orthogonal_family(const CStarAlgebraFin& a);
bool is_orthogonal_family(const std::vector<CElement>& family);

}  // namespace cwb
