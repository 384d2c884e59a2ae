#include "cwb/ceval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace cwb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_up(double x) { return std::nextafter(x, kInf); }
double next_down(double x) { return std::nextafter(x, -kInf); }

// Directed rounding from the exact error of the rounded operation.
double add_up(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err > 0 ? next_up(s) : s;
}
double add_down(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err < 0 ? next_down(s) : s;
}
double sub_up(double a, double b) { return add_up(a, -b); }
double sub_down(double a, double b) { return add_down(a, -b); }
double mul_up(double a, double b) {
  const double p = a * b;
  return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}
double mul_down(double a, double b) {
  const double p = a * b;
  return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}
// Exact rounding error of a + b.
double sum_error(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

double abs_up(Complex z) {
  if (z.imag() == 0.0) return std::abs(z.real());
  if (z.real() == 0.0) return std::abs(z.imag());
  return next_up(next_up(std::hypot(z.real(), z.imag())));
}
double abs_down(Complex z) {
  if (z.imag() == 0.0) return std::abs(z.real());
  if (z.real() == 0.0) return std::abs(z.imag());
  return std::max(0.0, next_down(next_down(std::hypot(z.real(), z.imag()))));
}

// Complex value with |computed - exact| <= err.
struct Approx {
  Complex v;
  double err = 0.0;
};

Approx approx_add(Approx a, Approx b, double sign) {
  const double br = sign * b.v.real();
  const double bi = sign * b.v.imag();
  const Complex s(a.v.real() + br, a.v.imag() + bi);
  const double round = add_up(std::abs(sum_error(a.v.real(), br)), std::abs(sum_error(a.v.imag(), bi)));
  return Approx{s, add_up(add_up(a.err, b.err), round)};
}

Approx approx_mul(Approx a, Approx b) {
  const double ar = a.v.real(), ai = a.v.imag(), br = b.v.real(), bi = b.v.imag();
  double round = 0.0;
  auto product = [&](double x, double y) {
    const double p = x * y;
    round = add_up(round, std::abs(std::fma(x, y, -p)));
    return p;
  };
  auto combine = [&](double x, double y) {
    round = add_up(round, std::abs(sum_error(x, y)));
    return x + y;
  };
  const double re = combine(product(ar, br), -product(ai, bi));
  const double im = combine(product(ar, bi), product(ai, br));
  // |a~ b~ - a b| <= |a~| eb + |b~| ea + ea eb
  double prop = 0.0;
  if (a.err > 0 || b.err > 0) {
    prop = add_up(add_up(mul_up(abs_up(a.v), b.err), mul_up(abs_up(b.v), a.err)), mul_up(a.err, b.err));
  }
  return Approx{Complex(re, im), add_up(prop, round)};
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// --- compiled formula -------------------------------------------------------

struct TermNode {
  CTerm::Kind kind;
  Complex value;
  int slot = -1;
  std::vector<TermNode> args;
};

struct Node {
  CFormula::Kind kind;
  double value = 0.0;
  double upper = 0.0;    // static bound
  double modulus = 0.0;  // quantifiers: modulus of the body in the bound variable
  Sort sort = Sort::Ball;
  int slot = -1;
  TermNode term;
  std::vector<Node> subs;
};

class Compiler {
public:
  int declare(const std::string& name) {
    scopes_[name].push_back(next_);
    return next_++;
  }
  int slot_count() const { return next_; }

  TermNode term(const CTerm& t) {
    TermNode n{t.kind, t.value, -1, {}};
    if (t.kind == CTerm::Kind::Var) {
      auto it = scopes_.find(t.var);
      if (it == scopes_.end() || it->second.empty()) throw PreconditionError("no value for free variable '" + t.var + "'");
      n.slot = it->second.back();
    }
    for (const auto& a : t.args) n.args.push_back(term(a));
    return n;
  }

  Node formula(const CFormula& f) {
    const auto bounds = formula_bounds(f);
    Node n;
    n.kind = f.kind;
    n.value = f.value;
    n.upper = bounds.upper;
    n.sort = f.sort;
    if (f.kind == CFormula::Kind::Norm) n.term = term(f.term);
    if (f.kind == CFormula::Kind::Sup || f.kind == CFormula::Kind::Inf) {
      const auto body = formula_bounds(f.subs[0]);
      auto it = body.modulus.find(f.var);
      n.modulus = it == body.modulus.end() ? 0.0 : it->second;
      n.slot = declare(f.var);
      n.subs.push_back(formula(f.subs[0]));
      scopes_[f.var].pop_back();
      return n;
    }
    for (const auto& s : f.subs) n.subs.push_back(formula(s));
    return n;
  }

private:
  std::map<std::string, std::vector<int>> scopes_;
  int next_ = 0;
};

// --- evaluation -------------------------------------------------------------

struct Exhausted {};

struct Context {
  std::atomic<std::uint64_t>* spent;
  std::uint64_t budget;
  std::atomic<int>* depth;
  std::size_t points;
  bool parallel;

  void charge() const {
    if (spent->fetch_add(1, std::memory_order_relaxed) + 1 > budget) throw Exhausted{};
  }
  void saw_depth(int d) const {
    int cur = depth->load(std::memory_order_relaxed);
    while (d > cur && !depth->compare_exchange_weak(cur, d, std::memory_order_relaxed)) {
    }
  }
};

using Env = std::vector<CElement>;

std::vector<Approx> eval_term(const TermNode& t, const Env& env, std::size_t points) {
  using K = CTerm::Kind;
  switch (t.kind) {
    case K::Const: return std::vector<Approx>(points, Approx{t.value, 0.0});
    case K::Var: {
      std::vector<Approx> out(points);
      for (std::size_t x = 0; x < points; ++x) out[x] = Approx{env[t.slot][x], 0.0};
      return out;
    }
    case K::Add:
    case K::Sub: {
      auto acc = eval_term(t.args[0], env, points);
      for (std::size_t i = 1; i < t.args.size(); ++i) {
        const auto b = eval_term(t.args[i], env, points);
        for (std::size_t x = 0; x < points; ++x) acc[x] = approx_add(acc[x], b[x], t.kind == K::Sub ? -1.0 : 1.0);
      }
      return acc;
    }
    case K::Neg: {
      auto a = eval_term(t.args[0], env, points);
      for (auto& z : a) z.v = -z.v;
      return a;
    }
    case K::Mul: {
      auto acc = eval_term(t.args[0], env, points);
      for (std::size_t i = 1; i < t.args.size(); ++i) {
        const auto b = eval_term(t.args[i], env, points);
        for (std::size_t x = 0; x < points; ++x) acc[x] = approx_mul(acc[x], b[x]);
      }
      return acc;
    }
    case K::Star: {
      auto a = eval_term(t.args[0], env, points);
      for (auto& z : a) z.v = std::conj(z.v);
      return a;
    }
  }
  throw std::logic_error("bad term kind");
}

Interval eval(const Node& n, Env& env, double tol, const Context& ctx);

// One box of the coordinate space of a quantified variable.
struct Box {
  std::vector<double> lo, hi;
  double bound = 0.0;  // sup: upper bound of the box; inf: lower bound
  int depth = 0;
  std::uint64_t order = 0;  // tie-break for determinism
  double sample = 0.0;      // value at the box sample; sup prefers high, inf low
};

class Quantifier {
public:
  Quantifier(const Node& n, const Context& ctx) : n_(n), ctx_(ctx), sup_(n.kind == CFormula::Kind::Sup) {}

  Interval run(Env& env, double tol) {
    if (n_.sort == Sort::Projection) return projections(env, tol);
    return branch_and_bound(env, tol);
  }

private:
  const Node& n_;
  const Context& ctx_;
  bool sup_;

  struct ChildResult {
    bool kept = false;
    Interval sample;  // enclosure of the body at the sample point
    Interval box;     // enclosure over the whole box
  };

  template <class F>
  void for_each(std::size_t count, F&& body) {
    if (!ctx_.parallel) {
      for (std::size_t i = 0; i < count; ++i) body(i);
      return;
    }
    std::exception_ptr failure;
    bool exhausted = false;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (const Exhausted&) {
#pragma omp critical
        exhausted = true;
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    if (exhausted) throw Exhausted{};
  }

  Context child_context() const {
    Context c = ctx_;
    c.parallel = false;
    return c;
  }

  Interval projections(Env& env, double tol) {
    const std::size_t points = ctx_.points;
    const std::size_t count = std::size_t{1} << points;
    std::vector<Interval> values(count);
    const Context inner = child_context();
    for_each(count, [&](std::size_t s) {
      inner.charge();
      Env local = env;
      CElement p(points);
      for (std::size_t x = 0; x < points; ++x) p[x] = (s >> x & 1U) ? 1.0 : 0.0;
      local[n_.slot] = std::move(p);
      values[s] = eval(n_.subs[0], local, tol, inner);
    });
    Interval out = values[0];
    for (const auto& v : values) {
      out.lo = sup_ ? std::max(out.lo, v.lo) : std::min(out.lo, v.lo);
      out.hi = sup_ ? std::max(out.hi, v.hi) : std::min(out.hi, v.hi);
    }
    return out;
  }

  std::size_t dims() const { return n_.sort == Sort::Ball ? 2 * ctx_.points : ctx_.points; }

  // Sample point inside the sort's domain and a radius R with ||v - sample||
  // <= R for every domain element v in the box. Returns false if the box
  // misses the domain.
  bool sample(const Box& b, CElement& s, double& radius) const {
    const std::size_t points = ctx_.points;
    s.assign(points, Complex{});
    radius = 0.0;
    for (std::size_t x = 0; x < points; ++x) {
      if (n_.sort != Sort::Ball) {
        const double c = 0.5 * (b.lo[x] + b.hi[x]);
        s[x] = c;
        radius = std::max(radius, std::max(sub_up(c, b.lo[x]), sub_up(b.hi[x], c)));
        continue;
      }
      const double rl = b.lo[2 * x], rh = b.hi[2 * x], il = b.lo[2 * x + 1], ih = b.hi[2 * x + 1];
      // Distance from the origin to the square.
      const double dx = rl > 0 ? rl : (rh < 0 ? -rh : 0.0);
      const double dy = il > 0 ? il : (ih < 0 ? -ih : 0.0);
      if (abs_down(Complex(dx, dy)) > 1.0) return false;
      Complex c(0.5 * (rl + rh), 0.5 * (il + ih));
      if (abs_up(c) > 1.0) {
        c *= (1.0 - 4 * std::numeric_limits<double>::epsilon()) / abs_up(c);
        while (abs_up(c) > 1.0) c *= 1.0 - 4 * std::numeric_limits<double>::epsilon();
      }
      s[x] = c;
      const double fx = std::max(std::abs(sub_up(c.real(), rl)), std::abs(sub_up(rh, c.real())));
      const double fy = std::max(std::abs(sub_up(c.imag(), il)), std::abs(sub_up(ih, c.imag())));
      radius = std::max(radius, abs_up(Complex(next_up(fx), next_up(fy))));
    }
    return true;
  }

  ChildResult evaluate_box(const Box& b, Env& env, double tol, const Context& inner) {
    inner.charge();
    ChildResult r;
    CElement s;
    double radius = 0.0;
    if (!sample(b, s, radius)) return r;
    r.kept = true;
    const double slack = mul_up(n_.modulus, radius);
    Env local = env;
    local[n_.slot] = std::move(s);
    r.sample = eval(n_.subs[0], local, std::max(tol / 4, slack), inner);
    r.box = Interval{std::max(0.0, sub_down(r.sample.lo, slack)), std::min(n_.upper, add_up(r.sample.hi, slack))};
    return r;
  }

  Interval branch_and_bound(Env& env, double tol) {
    const std::size_t d = dims();
    const double lower_edge = n_.sort == Sort::Positive ? 0.0 : -1.0;
    auto worse = [&](const Box& a, const Box& b) {
      // priority_queue top = best bound, then best sample, oldest first
      if (a.bound != b.bound) return sup_ ? a.bound < b.bound : a.bound > b.bound;
      if (a.sample != b.sample) return sup_ ? a.sample < b.sample : a.sample > b.sample;
      return a.order > b.order;
    };
    std::priority_queue<Box, std::vector<Box>, decltype(worse)> heap(worse);
    std::uint64_t order = 0;
    // best certified value attained at a sample point: sup -> max lo, inf -> min hi
    double best = sup_ ? 0.0 : n_.upper;
    const Context inner = child_context();

    auto absorb = [&](Box box, const ChildResult& r, double parent_bound) {
      if (!r.kept) return;
      ctx_.saw_depth(box.depth);
      if (sup_) {
        best = std::max(best, r.sample.lo);
        box.bound = std::min(r.box.hi, parent_bound);
        box.sample = r.sample.lo;
      } else {
        best = std::min(best, r.sample.hi);
        box.bound = std::max(r.box.lo, parent_bound);
        box.sample = r.sample.hi;
      }
      box.order = order++;
      heap.push(std::move(box));
    };

    Box root{std::vector<double>(d, lower_edge), std::vector<double>(d, 1.0), 0.0, 0, 0, 0.0};
    absorb(root, evaluate_box(root, env, tol, inner), sup_ ? n_.upper : 0.0);

    constexpr std::size_t kBatch = 8;
    for (;;) {
      if (heap.empty()) throw std::logic_error("branch and bound lost every box");
      const double top = heap.top().bound;
      if (sup_ ? top - best <= tol : best - top <= tol) {
        return sup_ ? Interval{std::min(best, top), top} : Interval{top, std::max(best, top)};
      }
      std::vector<Box> parents;
      while (!heap.empty() && parents.size() < kBatch) {
        Box b = heap.top();
        heap.pop();
        // Pruned: cannot beat the best sample.
        if (sup_ ? b.bound < best : b.bound > best) continue;
        parents.push_back(std::move(b));
      }
      if (parents.empty()) continue;
      std::vector<Box> children;
      std::vector<double> parent_bound;
      for (const auto& p : parents) {
        std::size_t axis = 0;
        for (std::size_t k = 1; k < d; ++k) {
          if (p.hi[k] - p.lo[k] > p.hi[axis] - p.lo[axis]) axis = k;
        }
        const double mid = 0.5 * (p.lo[axis] + p.hi[axis]);
        Box left = p, right = p;
        left.hi[axis] = mid;
        right.lo[axis] = mid;
        left.depth = right.depth = p.depth + 1;
        children.push_back(std::move(left));
        children.push_back(std::move(right));
        parent_bound.push_back(p.bound);
        parent_bound.push_back(p.bound);
      }
      std::vector<ChildResult> results(children.size());
      for_each(children.size(), [&](std::size_t i) { results[i] = evaluate_box(children[i], env, tol, inner); });
      for (std::size_t i = 0; i < children.size(); ++i) absorb(std::move(children[i]), results[i], parent_bound[i]);
    }
  }
};

Interval clamp(Interval v, double upper) { return Interval{std::max(0.0, v.lo), std::min(upper, v.hi)}; }

Interval eval(const Node& n, Env& env, double tol, const Context& ctx) {
  using K = CFormula::Kind;
  switch (n.kind) {
    case K::Const: return Interval{n.value, n.value};
    case K::Norm: {
      const auto values = eval_term(n.term, env, ctx.points);
      double lo = 0.0, hi = 0.0, err = 0.0;
      for (const auto& z : values) {
        lo = std::max(lo, abs_down(z.v));
        hi = std::max(hi, abs_up(z.v));
        err = std::max(err, z.err);
      }
      return clamp(Interval{sub_down(lo, err), add_up(hi, err)}, n.upper);
    }
    case K::Add: {
      const auto a = eval(n.subs[0], env, tol / 2, ctx);
      const auto b = eval(n.subs[1], env, tol / 2, ctx);
      return clamp(Interval{add_down(a.lo, b.lo), add_up(a.hi, b.hi)}, n.upper);
    }
    case K::Monus: {
      const auto a = eval(n.subs[0], env, tol / 2, ctx);
      const auto b = eval(n.subs[1], env, tol / 2, ctx);
      return clamp(Interval{std::max(sub_down(a.lo, b.hi), 0.0), std::max(sub_up(a.hi, b.lo), 0.0)}, n.upper);
    }
    case K::Max:
    case K::Min: {
      Interval out = eval(n.subs[0], env, tol, ctx);
      for (std::size_t i = 1; i < n.subs.size(); ++i) {
        const auto v = eval(n.subs[i], env, tol, ctx);
        if (n.kind == K::Max) {
          out = Interval{std::max(out.lo, v.lo), std::max(out.hi, v.hi)};
        } else {
          out = Interval{std::min(out.lo, v.lo), std::min(out.hi, v.hi)};
        }
      }
      return clamp(out, n.upper);
    }
    case K::Scale: {
      const auto a = eval(n.subs[0], env, n.value > 0 ? tol / n.value : tol, ctx);
      return clamp(Interval{mul_down(n.value, a.lo), mul_up(n.value, a.hi)}, n.upper);
    }
    case K::AbsDiff: {
      const auto a = eval(n.subs[0], env, tol / 2, ctx);
      const auto b = eval(n.subs[1], env, tol / 2, ctx);
      double lo = 0.0;
      if (a.lo > b.hi) lo = sub_down(a.lo, b.hi);
      if (b.lo > a.hi) lo = sub_down(b.lo, a.hi);
      const double hi = std::max(std::abs(sub_up(a.hi, b.lo)), std::abs(sub_up(b.hi, a.lo)));
      return clamp(Interval{std::max(lo, 0.0), hi}, n.upper);
    }
    case K::Sup:
    case K::Inf: return clamp(Quantifier(n, ctx).run(env, tol), n.upper);
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace

EvalCertificate ceval(const CFormula& phi, const CStarAlgebraFin& a, const CAssignment& params, double tol, Exec exec,
                      std::uint64_t budget) {
  if (!(tol > 0.0)) throw PreconditionError("tol must be > 0");
  if (a.points == 0 || a.points > kMaxEvalPoints) throw PreconditionError("ceval requires 1 <= |X| <= 6");
  Compiler compiler;
  Env env;
  for (const auto& v : phi.free_variables()) {
    auto it = params.find(v);
    if (it == params.end()) throw PreconditionError("no value for free variable '" + v + "'");
    if (it->second.size() != a.points) throw PreconditionError("parameter '" + v + "' has the wrong length");
    for (const auto& z : it->second) {
      if (abs_down(z) > 1.0) throw PreconditionError("parameter '" + v + "' has norm > 1");
    }
    compiler.declare(v);
    env.push_back(it->second);
  }
  const Node root = compiler.formula(phi);
  env.resize(static_cast<std::size_t>(compiler.slot_count()));

  std::atomic<std::uint64_t> spent{0};
  std::atomic<int> depth{0};
  const Context ctx{&spent, budget, &depth, a.points, exec == Exec::Parallel};

  EvalCertificate best{0.0, root.upper, 0};
  for (int k = 0;; ++k) {
    const double pass_tol = std::ldexp(1.0, -k);
    Interval v;
    try {
      v = eval(root, env, pass_tol, ctx);
    } catch (const Exhausted&) {
      throw EvalBudgetError("ceval node budget of " + std::to_string(budget) + " exhausted", best);
    }
    best.lower = std::max(best.lower, v.lo);
    best.upper = std::min(best.upper, v.hi);
    best.grid_depth = depth.load();
    if (best.lower > best.upper) throw std::logic_error("ceval passes produced disjoint enclosures");
    if (best.upper - best.lower <= tol) return best;
    if (k >= 60) throw EvalBudgetError("requested tolerance is below double precision", best);
  }
}

}  // namespace cwb
