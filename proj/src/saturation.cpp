#include "cwb/saturation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

#include "cwb/ceval.hpp"
#include "cwb/cformula.hpp"
#include "cwb/errors.hpp"

namespace cwb {

// --- CylinderSet ------------------------------------------------------------

CylinderSet CylinderSet::cylinder(const std::string& prefix) {
  if (prefix.size() > kMaxDepth) throw ResourceError("cylinder depth exceeds 20");
  std::size_t index = 0;
  for (char ch : prefix) {
    if (ch != '0' && ch != '1') throw PreconditionError("cylinder prefix must be a word over {0,1}");
    index = index * 2 + static_cast<std::size_t>(ch - '0');
  }
  std::vector<bool> cells(std::size_t{1} << prefix.size(), false);
  cells[index] = true;
  return from_cells(static_cast<unsigned>(prefix.size()), std::move(cells));
}

CylinderSet CylinderSet::from_cells(unsigned depth, std::vector<bool> cells) {
  if (depth > kMaxDepth) throw ResourceError("cylinder depth exceeds 20");
  if (cells.size() != (std::size_t{1} << depth)) throw PreconditionError("cell vector must have 2^depth entries");
  CylinderSet c(depth, std::move(cells));
  c.canonicalize();
  return c;
}

void CylinderSet::canonicalize() {
  while (depth_ > 0) {
    const std::size_t half = cells_.size() / 2;
    for (std::size_t k = 0; k < half; ++k) {
      if (cells_[2 * k] != cells_[2 * k + 1]) return;
    }
    std::vector<bool> coarse(half);
    for (std::size_t k = 0; k < half; ++k) coarse[k] = cells_[2 * k];
    cells_ = std::move(coarse);
    --depth_;
  }
}

std::vector<bool> CylinderSet::cells_at(unsigned depth) const {
  if (depth < depth_) throw std::logic_error("cells_at below canonical depth");
  if (depth > kMaxDepth) throw ResourceError("cylinder depth exceeds 20");
  const unsigned shift = depth - depth_;
  std::vector<bool> out(std::size_t{1} << depth);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cells_[i >> shift];
  return out;
}

CylinderSet CylinderSet::meet(const CylinderSet& o) const {
  const unsigned d = std::max(depth_, o.depth_);
  auto a = cells_at(d);
  const auto b = o.cells_at(d);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
  return from_cells(d, std::move(a));
}

CylinderSet CylinderSet::join(const CylinderSet& o) const {
  const unsigned d = std::max(depth_, o.depth_);
  auto a = cells_at(d);
  const auto b = o.cells_at(d);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
  return from_cells(d, std::move(a));
}

CylinderSet CylinderSet::complement() const {
  auto a = cells_;
  a.flip();
  return CylinderSet(depth_, std::move(a));
}

std::vector<std::string> CylinderSet::prefixes() const {
  std::vector<std::string> out;
  // Walk the binary tree; emit a prefix when its whole subtree is inside.
  auto walk = [&](auto&& self, std::size_t index, unsigned level, const std::string& prefix) -> void {
    const unsigned shift = depth_ - level;
    const std::size_t first = index << shift;
    const std::size_t count = std::size_t{1} << shift;
    bool all = true, any = false;
    for (std::size_t i = first; i < first + count; ++i) {
      all = all && cells_[i];
      any = any || cells_[i];
    }
    if (!any) return;
    if (all) {
      out.push_back(prefix);
      return;
    }
    self(self, index * 2, level + 1, prefix + "0");
    self(self, index * 2 + 1, level + 1, prefix + "1");
  };
  walk(walk, 0, 0, "");
  return out;
}

std::string CylinderSet::to_string() const {
  if (is_zero()) return "bot";
  if (is_top()) return "top";
  std::string out;
  for (const auto& p : prefixes()) out += (out.empty() ? "" : " | ") + p;
  return out;
}

// --- interpolation ----------------------------------------------------------

namespace {

template <class T, class Less>
void require_chain(const std::vector<T>& v, bool ascending, Less strictly_less, const char* name) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const bool ok = ascending ? (v[i - 1] == v[i] || strictly_less(v[i - 1], v[i]))
                              : (v[i - 1] == v[i] || strictly_less(v[i], v[i - 1]));
    if (!ok) throw PreconditionError(std::string(name) + " is not a chain in the stated direction");
  }
}

}  // namespace

CylinderSet interpolate_chain(const std::vector<CylinderSet>& Y, const std::vector<CylinderSet>& Z,
                              PresentedAtomlessBA) {
  auto less = [](const CylinderSet& a, const CylinderSet& b) { return a.strictly_below(b); };
  require_chain(Y, true, less, "Y");
  require_chain(Z, false, less, "Z");
  const CylinderSet lo = Y.empty() ? CylinderSet::bottom() : Y.back();
  const CylinderSet hi = Z.empty() ? CylinderSet::top() : Z.back();
  if (!lo.strictly_below(hi)) throw PreconditionError("Y is not strictly below Z");

  const CylinderSet gap = hi.minus(lo);
  const auto& cells = gap.cells();
  const auto first = static_cast<std::size_t>(std::find(cells.begin(), cells.end(), true) - cells.begin());
  std::string prefix;
  for (unsigned bit = gap.depth(); bit-- > 0;) prefix += ((first >> bit) & 1U) ? '1' : '0';
  const CylinderSet c = lo.join(CylinderSet::cylinder(prefix + "0"));

  if (!lo.strictly_below(c) || !c.strictly_below(hi)) throw std::logic_error("interpolant failed its check");
  return c;
}

std::optional<BAElement> interpolate_chain(const std::vector<BAElement>& Y, const std::vector<BAElement>& Z,
                                           const FiniteBoolAlg& b) {
  auto less = [&](BAElement x, BAElement y) { return x != y && b.leq(x, y); };
  for (auto e : Y) {
    if (!b.contains(e)) throw PreconditionError("Y contains a non-element");
  }
  for (auto e : Z) {
    if (!b.contains(e)) throw PreconditionError("Z contains a non-element");
  }
  require_chain(Y, true, less, "Y");
  require_chain(Z, false, less, "Z");
  const BAElement lo = Y.empty() ? b.bottom() : Y.back();
  const BAElement hi = Z.empty() ? b.top() : Z.back();
  if (!less(lo, hi)) throw PreconditionError("Y is not strictly below Z");
  const BAElement gap = hi & ~lo;
  if (std::popcount(gap) < 2) return std::nullopt;
  const BAElement c = lo | (gap & (~gap + 1));
  if (!less(lo, c) || !less(c, hi)) throw std::logic_error("interpolant failed its check");
  return c;
}

std::vector<ChainInstance> generate_chains(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<ChainInstance> out;
  out.reserve(count);
  while (out.size() < count) {
    // Ascending chain e_1 < ... < e_k below top; each step adds a random
    // nonempty part of the complement at a slightly finer depth.
    const std::size_t k = 1 + pick(6);
    std::vector<CylinderSet> chain;
    CylinderSet e = pick(3) == 0 ? CylinderSet::bottom() : CylinderSet::cylinder(std::string(1 + pick(2), '0'));
    chain.push_back(e);
    while (chain.size() < k) {
      const CylinderSet rest = e.complement();
      const unsigned d = std::min(rest.depth() + 1 + static_cast<unsigned>(pick(2)), 10U);
      auto cells = rest.cells_at(d);
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i]) free.push_back(i);
      }
      if (free.size() < 2) break;
      std::vector<bool> add(cells.size(), false);
      // Strictly between e and top: add some, never all, of the free cells.
      const std::size_t n_add = 1 + pick(free.size() - 1);
      std::shuffle(free.begin(), free.end(), rng);
      for (std::size_t i = 0; i < n_add; ++i) add[free[i]] = true;
      e = e.join(CylinderSet::from_cells(d, std::move(add)));
      chain.push_back(e);
    }
    ChainInstance inst;
    const std::size_t split = pick(chain.size() + 1);
    inst.Y.assign(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(split));
    inst.Z.assign(chain.rbegin(), chain.rend() - static_cast<std::ptrdiff_t>(split));
    // The chain's own elements are distinct, so Y < Z whenever both sides are
    // nonempty; a lone side still needs room against bottom or top.
    if (inst.Y.empty() && !inst.Z.empty() && inst.Z.back().is_zero()) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

// --- degree-1 types ---------------------------------------------------------

CElement DegreeOnePolynomial::evaluate(const std::vector<CElement>& x) const {
  CElement out = constant;
  for (const auto& t : terms) {
    for (std::size_t p = 0; p < out.size(); ++p) {
      const Complex z = t.star ? std::conj(x[t.var][p]) : x[t.var][p];
      out[p] += t.coefficient[p] * z;
    }
  }
  return out;
}

double TypeCondition::distance(double value) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& k : target) {
    best = std::min(best, value < k.lo ? k.lo - value : (value > k.hi ? value - k.hi : 0.0));
  }
  return best;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex into_disc(Complex c) {
  const double r = std::abs(c);
  if (r <= 1.0 - 4 * kEps) return c;
  c *= (1.0 - 4 * kEps) / r;
  while (std::abs(c) > 1.0 - 2 * kEps) c *= 1.0 - 4 * kEps;
  return c;
}

// Sum of constants in [0, 1] equal to c (c >= 0).
CFormula constant_formula(double c) {
  if (c <= 1.0) return CFormula::constant(c);
  return CFormula::add(CFormula::constant(1.0), constant_formula(c - 1.0));
}

// max_n dist(||P_n||, K_n) as a clogic formula over the variables x0, x1, ...
// and coefficient parameters scaled into the unit ball.
struct ViolationFormula {
  CFormula formula;
  CAssignment params;
};

ViolationFormula violation_formula(const std::vector<TypeCondition>& conditions) {
  ViolationFormula out;
  std::vector<CFormula> parts;
  auto scaled = [&](const CElement& coeff, const std::string& name, std::vector<CTerm> factors) {
    const double s = norm(coeff) * (1.0 + 8 * kEps);
    if (s == 0.0) return std::optional<CTerm>{};
    CElement unit(coeff.size());
    for (std::size_t p = 0; p < coeff.size(); ++p) unit[p] = coeff[p] / s;
    out.params[name] = std::move(unit);
    factors.insert(factors.begin(), {CTerm::constant(s), CTerm::variable(name)});
    return std::optional<CTerm>(CTerm::mul(std::move(factors)));
  };
  for (std::size_t n = 0; n < conditions.size(); ++n) {
    const auto& c = conditions[n];
    std::vector<CTerm> summands;
    if (auto t = scaled(c.polynomial.constant, "k" + std::to_string(n), {})) summands.push_back(*t);
    for (std::size_t j = 0; j < c.polynomial.terms.size(); ++j) {
      const auto& lt = c.polynomial.terms[j];
      CTerm x = CTerm::variable("x" + std::to_string(lt.var));
      if (lt.star) x = CTerm::star(x);
      if (auto t = scaled(lt.coefficient, "k" + std::to_string(n) + "_" + std::to_string(j), {x})) {
        summands.push_back(*t);
      }
    }
    if (summands.empty()) summands.push_back(CTerm::constant(0.0));
    const CFormula value = CFormula::norm(CTerm::add(std::move(summands)));
    std::vector<CFormula> options;
    for (const auto& k : c.target) {
      options.push_back(CFormula::add(CFormula::monus(constant_formula(k.lo), value),
                                      CFormula::monus(value, constant_formula(k.hi))));
    }
    parts.push_back(CFormula::min(std::move(options)));
  }
  out.formula = CFormula::max(std::move(parts));
  return out;
}

struct TBox {
  std::vector<double> lo, hi;
  double bound = 0.0;
  std::size_t witness = 0;  // condition giving the bound
  std::uint64_t order = 0;
  double sample = 0.0;  // violation at the box sample; breaks bound ties
};

class TypeSearch {
public:
  TypeSearch(const std::vector<TypeCondition>& conditions, std::size_t vars, std::size_t points, bool parallel)
      : conds_(conditions), vars_(vars), points_(points), parallel_(parallel) {}

  std::size_t dims() const { return 2 * vars_ * points_; }
  std::size_t dim(std::size_t var, std::size_t p, int part) const { return (var * points_ + p) * 2 + part; }

  struct Eval {
    bool kept = false;
    double bound = 0.0;
    std::size_t witness = 0;
    double violation = 0.0;
    std::vector<CElement> sample;
  };

  Eval evaluate(const TBox& b) const {
    Eval e;
    std::vector<CElement> centre(vars_, CElement(points_));
    std::vector<std::vector<double>> half(vars_, std::vector<double>(points_));
    for (std::size_t v = 0; v < vars_; ++v) {
      for (std::size_t p = 0; p < points_; ++p) {
        const double rl = b.lo[dim(v, p, 0)], rh = b.hi[dim(v, p, 0)];
        const double il = b.lo[dim(v, p, 1)], ih = b.hi[dim(v, p, 1)];
        const double dx = rl > 0 ? rl : (rh < 0 ? -rh : 0.0);
        const double dy = il > 0 ? il : (ih < 0 ? -ih : 0.0);
        if (std::hypot(dx, dy) > 1.0 + 1e-12) return e;
        centre[v][p] = Complex(0.5 * (rl + rh), 0.5 * (il + ih));
        half[v][p] = 0.5 * std::hypot(rh - rl, ih - il) * (1 + 1e-12);
      }
    }
    e.kept = true;
    e.bound = -1.0;
    for (std::size_t n = 0; n < conds_.size(); ++n) {
      const auto& poly = conds_[n].polynomial;
      const CElement value = poly.evaluate(centre);
      double lo = 0.0, hi = 0.0;
      for (std::size_t p = 0; p < points_; ++p) {
        double spread = 0.0;
        for (const auto& t : poly.terms) spread += std::abs(t.coefficient[p]) * half[t.var][p];
        const double m = std::abs(value[p]);
        lo = std::max(lo, m - spread - 1e-12);
        hi = std::max(hi, m + spread + 1e-12);
      }
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& k : conds_[n].target) gap = std::min(gap, std::max({k.lo - hi, lo - k.hi, 0.0}));
      if (gap > e.bound) {
        e.bound = gap;
        e.witness = n;
      }
    }
    e.sample = centre;
    for (auto& x : e.sample) {
      for (auto& z : x) z = into_disc(z);
    }
    e.violation = violation(e.sample);
    return e;
  }

  double violation(const std::vector<CElement>& x) const {
    double v = 0.0;
    for (const auto& c : conds_) v = std::max(v, c.distance(norm(c.polynomial.evaluate(x))));
    return v;
  }

  template <class F>
  void for_each(std::size_t count, F&& body) const {
    if (!parallel_) {
      for (std::size_t i = 0; i < count; ++i) body(i);
      return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

private:
  const std::vector<TypeCondition>& conds_;
  std::size_t vars_, points_;
  bool parallel_;
};

}  // namespace

RealizeResult realize_type(const std::vector<TypeCondition>& conditions, const CStarAlgebraFin& a, double tol,
                           Exec exec, std::uint64_t budget) {
  if (!(tol > 0.0)) throw PreconditionError("tol must be > 0");
  if (a.points == 0 || a.points > kMaxTypePoints) throw PreconditionError("realize_type requires 1 <= |X| <= 4");
  if (conditions.empty() || conditions.size() > kMaxTypeConditions) {
    throw PreconditionError("realize_type takes 1 to 16 conditions");
  }
  std::size_t vars = 1;
  for (const auto& c : conditions) {
    if (c.polynomial.constant.size() != a.points) throw PreconditionError("constant has the wrong length");
    if (c.target.empty()) throw PreconditionError("empty target");
    for (const auto& k : c.target) {
      if (!(0.0 <= k.lo && k.lo <= k.hi) || !std::isfinite(k.hi)) {
        throw PreconditionError("targets are intervals [lo, hi] with 0 <= lo <= hi");
      }
    }
    for (const auto& t : c.polynomial.terms) {
      if (t.var >= kMaxTypeVariables) throw PreconditionError("at most 3 variables");
      if (t.coefficient.size() != a.points) throw PreconditionError("coefficient has the wrong length");
      vars = std::max(vars, t.var + 1);
    }
  }

  TypeSearch search(conditions, vars, a.points, exec == Exec::Parallel);
  auto worse = [](const TBox& x, const TBox& y) {
    if (x.bound != y.bound) return x.bound > y.bound;
    if (x.sample != y.sample) return x.sample > y.sample;
    return x.order > y.order;
  };
  std::priority_queue<TBox, std::vector<TBox>, decltype(worse)> heap(worse);
  std::uint64_t order = 0;
  std::set<std::size_t> delta;
  RealizeResult result;
  result.upper_bound = std::numeric_limits<double>::infinity();
  std::vector<CElement> best;

  auto absorb = [&](TBox box, const TypeSearch::Eval& e, double parent_bound) {
    if (!e.kept) return;
    if (e.violation < result.upper_bound) {
      result.upper_bound = e.violation;
      best = e.sample;
    }
    box.bound = std::max(e.bound, parent_bound);
    box.witness = e.bound >= parent_bound ? e.witness : box.witness;
    box.order = order++;
    box.sample = e.violation;
    heap.push(std::move(box));
  };

  const std::size_t d = search.dims();
  TBox root{std::vector<double>(d, -1.0), std::vector<double>(d, 1.0), 0.0, 0, 0, 0.0};
  absorb(root, search.evaluate(root), 0.0);
  result.boxes = 1;

  const ViolationFormula vf = violation_formula(conditions);
  constexpr std::size_t kBatch = 8;
  for (;;) {
    if (heap.empty()) throw std::logic_error("type search lost every box");
    result.lower_bound = heap.top().bound;
    if (result.upper_bound <= tol / 2) {
      CAssignment params = vf.params;
      for (std::size_t v = 0; v < vars; ++v) params["x" + std::to_string(v)] = best[v];
      const auto cert = ceval(vf.formula, a, params, tol / 4, Exec::Serial);
      if (cert.upper <= tol) {
        result.status = RealizeResult::Status::Realized;
        result.assignment = best;
        result.violation = search.violation(best);
        result.certified_violation = cert.upper;
        return result;
      }
    }
    if (result.lower_bound > 0 && result.lower_bound >= result.upper_bound / 2) {
      result.status = RealizeResult::Status::Unsatisfiable;
      result.epsilon = result.lower_bound;
      auto rest = heap;
      while (!rest.empty()) {
        delta.insert(rest.top().witness);
        rest.pop();
      }
      result.delta.assign(delta.begin(), delta.end());
      return result;
    }
    if (result.boxes >= budget) {
      result.status = RealizeResult::Status::Inconclusive;
      return result;
    }
    std::vector<TBox> children;
    std::vector<double> parent_bound;
    while (!heap.empty() && children.size() < 2 * kBatch) {
      TBox b = heap.top();
      heap.pop();
      if (b.bound > result.upper_bound) {
        delta.insert(b.witness);  // pruned: refuted by its witness below the best found
        continue;
      }
      std::size_t axis = 0;
      for (std::size_t k = 1; k < d; ++k) {
        if (b.hi[k] - b.lo[k] > b.hi[axis] - b.lo[axis]) axis = k;
      }
      const double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
      TBox left = b, right = b;
      left.hi[axis] = mid;
      right.lo[axis] = mid;
      children.push_back(std::move(left));
      children.push_back(std::move(right));
      parent_bound.push_back(b.bound);
      parent_bound.push_back(b.bound);
    }
    std::vector<TypeSearch::Eval> evals(children.size());
    search.for_each(children.size(), [&](std::size_t i) { evals[i] = search.evaluate(children[i]); });
    result.boxes += children.size();
    for (std::size_t i = 0; i < children.size(); ++i) absorb(std::move(children[i]), evals[i], parent_bound[i]);
  }
}

std::vector<TypeCondition> orthogonality_type(std::size_t points) {
  const CStarAlgebraFin a{points};
  std::vector<TypeCondition> out;
  out.push_back(TypeCondition{DegreeOnePolynomial{a.zero(), {LinearTerm{0, false, a.unit()}}}, {{1.0, 1.0}}});
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(TypeCondition{DegreeOnePolynomial{a.zero(), {LinearTerm{0, false, a.indicator(std::uint64_t{1} << i)}}},
                                {{0.0, 0.0}}});
  }
  return out;
}

std::vector<TypeCondition> rickart_type(std::size_t points) {
  const CStarAlgebraFin a{points};
  const CElement b = a.unit();
  const LinearTerm plus_x{0, false, a.unit()};
  const LinearTerm minus_x{0, false, a.scalar(-1.0)};
  std::vector<TypeCondition> out;
  out.push_back(TypeCondition{DegreeOnePolynomial{a.zero(), {plus_x}}, {{1.0, 1.0}}});
  out.push_back(TypeCondition{DegreeOnePolynomial{b, {minus_x}}, {{1.0, 2.0}}});
  out.push_back(TypeCondition{DegreeOnePolynomial{b - a.unit(), {minus_x}}, {{1.0, 1.0}}});
  for (std::size_t n = 0; n < points; ++n) {
    const CElement bn = a.indicator((std::uint64_t{1} << (n + 1)) - 1);
    out.push_back(TypeCondition{DegreeOnePolynomial{a.zero() - bn - a.unit(), {plus_x}}, {{0.0, 1.0}}});
  }
  return out;
}

// --- orthogonal families ----------------------------------------------------

bool is_orthogonal_family(const std::vector<CElement>& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& e = family[i];
    if (norm(e) != 1.0) return false;
    for (const auto& z : e) {
      if (z.imag() != 0.0 || z.real() < 0.0) return false;
    }
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (norm(e * family[j]) != 0.0) return false;
    }
  }
  return true;
}

OrthogonalFamily max_orthogonal_family(const CStarAlgebraFin& a) {
  if (a.points > 8) throw PreconditionError("max_orthogonal_family requires |X| <= 8");
  OrthogonalFamily out;
  out.size = a.points;
  for (std::size_t x = 0; x < a.points; ++x) out.witness.push_back(a.indicator(std::uint64_t{1} << x));
  if (!is_orthogonal_family(out.witness) || out.witness.size() != out.size) {
    throw std::logic_error("indicator family failed verification");
  }
  return out;
}

}  // namespace cwb
