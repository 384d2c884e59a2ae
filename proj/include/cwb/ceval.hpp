#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cwb/cformula.hpp"
#include "cwb/cstar.hpp"
#include "cwb/errors.hpp"
#include "cwb/exec.hpp"

namespace cwb {

struct EvalCertificate {
  double lower = 0.0;
  double upper = 0.0;
  int grid_depth = 0;  // deepest box subdivision used

  bool contains(double x) const { return lower <= x && x <= upper; }
  double width() const { return upper - lower; }
};

// Budget exhausted; `best` is still a valid (wider than requested) enclosure.
class EvalBudgetError : public ResourceError {
public:
  EvalBudgetError(const std::string& what, EvalCertificate best) : ResourceError(what), best_(best) {}
  const EvalCertificate& best() const { return best_; }

private:
  EvalCertificate best_;
};

using CAssignment = std::map<std::string, CElement>;

inline constexpr std::size_t kMaxEvalPoints = 6;
inline constexpr std::uint64_t kEvalNodeBudget = 2'000'000;

// Certified enclosure of phi in C(X) under params. Projection quantifiers are
// exhaustive; the other sorts use Lipschitz branch and bound over boxes of
// coordinates. Arithmetic tracks floating-point error exactly where it can,
// so computations on small integers give zero-width enclosures.
//
// The result is the intersection of passes at tolerances 1, 1/2, 1/4, ...,
// stopping once the width is <= tol, so a smaller tol refines the same chain
// and yields a nested enclosure. Deterministic, and identical for both Exec
// modes (parallelism is over sibling boxes of the outermost quantifier in
// fixed batches).
EvalCertificate ceval(const CFormula& phi, const CStarAlgebraFin& a, const CAssignment& params, double tol,
                      Exec exec = Exec::Parallel, std::uint64_t budget = kEvalNodeBudget);

}  // namespace cwb
