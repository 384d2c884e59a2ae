#include "cwb/cstar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

void require_same_size(const CElement& a, const CElement& b) {
  if (a.size() != b.size()) throw PreconditionError("elements of different algebras");
}

void require_tuple(const std::vector<CElement>& a, const SpectrumPoint& lambda) {
  if (a.empty()) throw PreconditionError("empty tuple");
  if (a.size() != lambda.size()) throw PreconditionError("tuple and lambda lengths differ");
  for (const auto& e : a) require_same_size(e, a.front());
}

}  // namespace

CElement CStarAlgebraFin::indicator(std::uint64_t support) const {
  CElement out(points);
  for (std::size_t x = 0; x < points; ++x) out[x] = (support >> x & 1U) ? 1.0 : 0.0;
  return out;
}

std::vector<CElement> CStarAlgebraFin::projections() const {
  if (points > 20) throw ResourceError("too many projections to enumerate");
  std::vector<CElement> out;
  out.reserve(std::size_t{1} << points);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << points); ++s) out.push_back(indicator(s));
  return out;
}

double norm(const CElement& a) {
  double n = 0.0;
  for (const auto& z : a) n = std::max(n, std::abs(z));
  return n;
}

CElement star(const CElement& a) {
  CElement out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [](Complex z) { return std::conj(z); });
  return out;
}

CElement operator+(const CElement& a, const CElement& b) {
  require_same_size(a, b);
  CElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

CElement operator-(const CElement& a, const CElement& b) {
  require_same_size(a, b);
  CElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

CElement operator*(const CElement& a, const CElement& b) {
  require_same_size(a, b);
  CElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

CElement operator*(Complex c, const CElement& a) {
  CElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

CElement abs(const CElement& a) {
  CElement out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [](Complex z) { return Complex(std::abs(z)); });
  return out;
}

bool is_projection(const CElement& p, double tol) {
  return std::all_of(p.begin(), p.end(), [&](Complex z) {
    return std::abs(z.imag()) <= tol && (std::abs(z.real()) <= tol || std::abs(z.real() - 1.0) <= tol);
  });
}

// --- joint spectrum ---------------------------------------------------------

std::vector<SpectrumPoint> joint_spectrum(const std::vector<CElement>& a) {
  if (a.empty()) throw PreconditionError("empty tuple");
  for (const auto& e : a) require_same_size(e, a.front());
  std::vector<SpectrumPoint> out;
  for (std::size_t x = 0; x < a.front().size(); ++x) {
    SpectrumPoint p;
    for (const auto& e : a) p.push_back(e[x]);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  return out;
}

SingularityReport singularity_report(const std::vector<CElement>& a, const SpectrumPoint& lambda) {
  require_tuple(a, lambda);
  const std::size_t points = a.front().size();
  SingularityReport r;

  // (0) a point where every coordinate matches.
  for (std::size_t x = 0; x < points && !r.pointwise; ++x) {
    bool all = true;
    for (std::size_t i = 0; i < a.size(); ++i) all = all && a[i][x] == lambda[i];
    r.pointwise = all;
  }

  // (i) s = sum |lambda_i - a_i| is invertible in C(X) iff it has no zero.
  r.min_abs_sum = points == 0 ? 0.0 : INFINITY;
  for (std::size_t x = 0; x < points; ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(lambda[i] - a[i][x]);
    r.min_abs_sum = std::min(r.min_abs_sum, s);
  }
  r.sum_not_invertible = r.min_abs_sum == 0.0;

  // (ii) x_i = conj(lambda_i - a_i) / sum_j |lambda_j - a_j|^2 pointwise. At
  // a point where every difference vanishes no choice of x_i gives 1.
  bool blocked = false;
  double residual = 0.0;
  for (std::size_t x = 0; x < points; ++x) {
    double denom = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) denom += std::norm(lambda[i] - a[i][x]);
    if (denom == 0.0) {
      blocked = true;
      continue;
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Complex d = lambda[i] - a[i][x];
      sum += d * (std::conj(d) / denom);
    }
    residual = std::max(residual, std::abs(sum - 1.0));
  }
  r.residual = residual;
  r.unsolvable = blocked || residual > kSolveResidualTol;
  return r;
}

bool is_singular(const std::vector<CElement>& a, const SpectrumPoint& lambda) {
  const auto r = singularity_report(a, lambda);
  if (!r.consistent()) throw std::logic_error("singularity tests disagree");
  return r.pointwise;
}

double spectrum_indicator(const std::vector<CElement>& a, const SpectrumPoint& lambda) {
  require_tuple(a, lambda);
  double peak = 0.0;  // || (1 - |s|)_+ ||
  for (std::size_t x = 0; x < a.front().size(); ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(lambda[i] - a[i][x]);
    peak = std::max(peak, std::max(1.0 - s, 0.0));
  }
  return std::abs(1.0 - peak);
}

// --- clopen coding ----------------------------------------------------------

std::vector<GridPoint> coding_grid(std::uint64_t m, GridPadding padding) {
  if (m == 0) throw PreconditionError("grid level must be >= 1");
  if (m > 4096) throw ResourceError("grid level exceeds 4096");
  const auto r = static_cast<std::int64_t>(padding == GridPadding::None ? m : m + 1);
  std::vector<GridPoint> out;
  for (std::int64_t j1 = -r; j1 <= r; ++j1) {
    for (std::int64_t j2 = -r; j2 <= r; ++j2) {
      if (j1 * j1 + j2 * j2 <= r * r) out.push_back(GridPoint{j1, j2});
    }
  }
  return out;
}

std::vector<CodeSet> clopen_code(const CElement& f, std::uint64_t m, GridPadding padding) {
  if (f.size() > 64) throw PreconditionError("clopen coding supports |X| <= 64");
  if (norm(f) > 1.0) throw PreconditionError("clopen coding requires ||f|| <= 1");
  const auto md = static_cast<double>(m);
  std::vector<CodeSet> out;
  for (const auto& y : coding_grid(m, padding)) {
    std::uint64_t members = 0;
    for (std::size_t x = 0; x < f.size(); ++x) {
      // |f(x) - y| < 1/m, scaled by m.
      const double dr = f[x].real() * md - static_cast<double>(y.j1);
      const double di = f[x].imag() * md - static_cast<double>(y.j2);
      if (dr * dr + di * di < 1.0) members |= std::uint64_t{1} << x;
    }
    if (members != 0) out.push_back(CodeSet{y, m, members});
  }
  return out;
}

CElement reconstruct(const std::vector<CodeSet>& codes, std::size_t points) {
  std::uint64_t level = 0;
  for (const auto& c : codes) level = std::max(level, c.m);
  CElement out(points);
  for (std::size_t x = 0; x < points; ++x) {
    const CodeSet* best = nullptr;
    auto key = [](const GridPoint& g) { return std::make_tuple(g.j1 * g.j1 + g.j2 * g.j2, g.j1, g.j2); };
    for (const auto& c : codes) {
      if (c.m != level || !(c.members >> x & 1U)) continue;
      if (best == nullptr || key(c.label) < key(best->label)) best = &c;
    }
    if (best == nullptr) throw PreconditionError("point " + std::to_string(x) + " lies in no code set");
    out[x] = best->label.value(level);
  }
  return out;
}

// --- infinite projections ---------------------------------------------------

double psi_infinite_projection(const CElement& p) {
  if (p.size() > 4) throw PreconditionError("psi is evaluated exhaustively only for |X| <= 4");
  if (!is_projection(p)) throw PreconditionError("psi requires a projection");
  static const Complex kValues[] = {0.0, 1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  const double head = norm(p - star(p)) + norm(p - p * p);
  double best = INFINITY;
  std::vector<std::size_t> digits(p.size(), 0);
  for (;;) {
    CElement y(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) y[x] = kValues[digits[x]];
    const CElement ys = star(y);
    const CElement yys = y * ys;
    const CElement ysy = ys * y;
    const double value = norm(yys - p) + norm(ysy * p - ysy) + std::max(1.0 - norm(ysy - p), 0.0);
    best = std::min(best, value);
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == 5) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return head + best;
}

}  // namespace cwb
