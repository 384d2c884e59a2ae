#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cwb {

using Complex = std::complex<double>;
// A function X -> C, one value per point.
using CElement = std::vector<Complex>;

// C(X) for a finite discrete X: pointwise operations, sup norm.
struct CStarAlgebraFin {
  std::size_t points = 0;

  CElement zero() const { return CElement(points); }
  CElement unit() const { return CElement(points, Complex(1.0)); }
  CElement scalar(Complex c) const { return CElement(points, c); }
  CElement indicator(std::uint64_t support) const;
  // All 2^points projections, indexed by support bitmask.
  std::vector<CElement> projections() const;

  friend bool operator==(const CStarAlgebraFin&, const CStarAlgebraFin&) = default;
};

double norm(const CElement& a);
CElement star(const CElement& a);
CElement operator+(const CElement& a, const CElement& b);
CElement operator-(const CElement& a, const CElement& b);
CElement operator*(const CElement& a, const CElement& b);
CElement operator*(Complex c, const CElement& a);
CElement abs(const CElement& a);

bool is_projection(const CElement& p, double tol = 0.0);

// --- joint spectrum ---------------------------------------------------------

using SpectrumPoint = std::vector<Complex>;

// {(a_1(x), ..., a_n(x)) : x in X}, without duplicates, in order of first
// occurrence.
std::vector<SpectrumPoint> joint_spectrum(const std::vector<CElement>& a);

// The three independent singularity tests for (lambda_i - a_i)_i.
struct SingularityReport {
  bool pointwise = false;         // some x has a_i(x) = lambda_i for all i
  bool sum_not_invertible = false;  // min_x sum_i |lambda_i - a_i(x)| = 0
  bool unsolvable = false;          // no x_i with sum (lambda_i - a_i) x_i = 1
  double min_abs_sum = 0.0;
  double residual = 0.0;  // of the explicit solution, when one was built

  bool consistent() const { return pointwise == sum_not_invertible && pointwise == unsolvable; }
};

inline constexpr double kSolveResidualTol = 1e-12;

SingularityReport singularity_report(const std::vector<CElement>& a, const SpectrumPoint& lambda);
// Pointwise verdict; throws std::logic_error if the three tests disagree.
bool is_singular(const std::vector<CElement>& a, const SpectrumPoint& lambda);

// F(s, 0) = |1 - ||(1 - |s|)_+|||, with s = sum_i |lambda_i - a_i|.
double spectrum_indicator(const std::vector<CElement>& a, const SpectrumPoint& lambda);

// --- clopen coding ----------------------------------------------------------

enum class GridPadding { None, OneStep };

struct GridPoint {
  std::int64_t j1 = 0;
  std::int64_t j2 = 0;
  Complex value(std::uint64_t m) const {
    return Complex(static_cast<double>(j1) / static_cast<double>(m), static_cast<double>(j2) / static_cast<double>(m));
  }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

// {(j1 + i j2)/m : |j1 + i j2| <= m} (None) or <= m + 1 (OneStep). The
// unpadded grid does not cover the whole unit disc at distance < 1/m.
std::vector<GridPoint> coding_grid(std::uint64_t m, GridPadding padding = GridPadding::OneStep);

struct CodeSet {
  GridPoint label;
  std::uint64_t m = 0;
  std::uint64_t members = 0;  // bitmask over X: {x : |f(x) - y| < 1/m}
};

// Nonempty code sets of f at level m. Requires ||f|| <= 1, m >= 1, |X| <= 64.
std::vector<CodeSet> clopen_code(const CElement& f, std::uint64_t m, GridPadding padding = GridPadding::OneStep);

// Rebuilds f' from the code sets at the finest level present: each point
// takes the grid value of minimal modulus among the sets containing it
// (ties: smallest real part, then imaginary part). Throws PreconditionError
// if some point lies in no set.
CElement reconstruct(const std::vector<CodeSet>& codes, std::size_t points);

// --- infinite projections ---------------------------------------------------

// psi(p) = ||p - p*|| + ||p - p^2||
//        + inf_y (||y y* - p|| + ||y* y p - y* y|| + (1 -. ||y* y - p||))
// with y over partial isometries taking values in {0, 1, i, -1, -i}.
// Requires a projection and |X| <= 4.
double psi_infinite_projection(const CElement& p);

}  // namespace cwb
