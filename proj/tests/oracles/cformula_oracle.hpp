#pragma once

// Plain double evaluation of continuous formulas. Projection quantifiers are
// exhaustive; other sorts are sampled on a coarse grid, which only gives a
// one-sided bound (below the sup, above the inf).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/cformula.hpp"

namespace oracle {

using cwb::CElement;
using cwb::Complex;
using Env = std::map<std::string, CElement>;

inline CElement term_value(const cwb::CTerm& t, const Env& env, std::size_t points) {
  using K = cwb::CTerm::Kind;
  switch (t.kind) {
    case K::Const: return CElement(points, t.value);
    case K::Var: return env.at(t.var);
    case K::Add:
    case K::Sub:
    case K::Mul: {
      CElement acc = term_value(t.args[0], env, points);
      for (std::size_t i = 1; i < t.args.size(); ++i) {
        const CElement b = term_value(t.args[i], env, points);
        for (std::size_t x = 0; x < points; ++x) {
          if (t.kind == K::Add) acc[x] += b[x];
          if (t.kind == K::Sub) acc[x] -= b[x];
          if (t.kind == K::Mul) acc[x] *= b[x];
        }
      }
      return acc;
    }
    case K::Neg: {
      CElement a = term_value(t.args[0], env, points);
      for (auto& z : a) z = -z;
      return a;
    }
    case K::Star: {
      CElement a = term_value(t.args[0], env, points);
      for (auto& z : a) z = std::conj(z);
      return a;
    }
  }
  throw std::logic_error("bad term");
}

// Elements of a sort used as quantifier range. Projections: all of them.
// Other sorts: products of a small coordinate grid (|X| <= 2 keeps it tiny).
inline std::vector<CElement> sort_range(cwb::Sort s, std::size_t points) {
  std::vector<Complex> coords;
  switch (s) {
    case cwb::Sort::Projection: coords = {0.0, 1.0}; break;
    case cwb::Sort::Positive: coords = {0.0, 0.5, 1.0}; break;
    case cwb::Sort::SelfAdjoint: coords = {-1.0, -0.5, 0.0, 0.5, 1.0}; break;
    case cwb::Sort::Ball: coords = {0.0, 1.0, -1.0, Complex(0, 1), Complex(0, -1), Complex(0.5, 0.5)}; break;
  }
  std::vector<CElement> out{CElement{}};
  for (std::size_t x = 0; x < points; ++x) {
    std::vector<CElement> next;
    for (const auto& e : out) {
      for (const auto& c : coords) {
        CElement f = e;
        f.push_back(c);
        next.push_back(std::move(f));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline double value(const cwb::CFormula& f, Env& env, std::size_t points) {
  using K = cwb::CFormula::Kind;
  switch (f.kind) {
    case K::Const: return f.value;
    case K::Norm: {
      double n = 0.0;
      for (const auto& z : term_value(f.term, env, points)) n = std::max(n, std::abs(z));
      return n;
    }
    case K::Add: return value(f.subs[0], env, points) + value(f.subs[1], env, points);
    case K::Monus: return std::max(value(f.subs[0], env, points) - value(f.subs[1], env, points), 0.0);
    case K::AbsDiff: return std::abs(value(f.subs[0], env, points) - value(f.subs[1], env, points));
    case K::Scale: return f.value * value(f.subs[0], env, points);
    case K::Max:
    case K::Min: {
      double v = value(f.subs[0], env, points);
      for (std::size_t i = 1; i < f.subs.size(); ++i) {
        const double w = value(f.subs[i], env, points);
        v = f.kind == K::Max ? std::max(v, w) : std::min(v, w);
      }
      return v;
    }
    case K::Sup:
    case K::Inf: {
      const auto saved = env.find(f.var) == env.end() ? std::nullopt : std::optional<CElement>(env[f.var]);
      double best = f.kind == K::Sup ? -1.0 : 1e300;
      for (const auto& e : sort_range(f.sort, points)) {
        env[f.var] = e;
        const double v = value(f.subs[0], env, points);
        best = f.kind == K::Sup ? std::max(best, v) : std::min(best, v);
      }
      if (saved) {
        env[f.var] = *saved;
      } else {
        env.erase(f.var);
      }
      return best;
    }
  }
  throw std::logic_error("bad formula");
}

}  // namespace oracle
