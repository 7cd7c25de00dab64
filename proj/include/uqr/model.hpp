#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "uqr/error.hpp"

namespace uqr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Total piece count of a histogram, counting the two zero-density infinite
// tails. breaks().size() + 1 == pieces.
inline constexpr int kMaxHistogramPieces = 16;
inline constexpr double kMassTolerance = 1e-9;

// Threshold reports drop their geometric bar by this much, then re-test every
// candidate against the model probability. Index-side heights can drift a few
// ulps from the model's evaluation order, so an exact bar could lose a point
// whose probability equals the threshold; the slack plus the exact filter
// keeps the reported set identical to brute force.
inline constexpr double kTauSlack = 1e-9;

struct UniformPdf {
    double lo = 0.0;
    double hi = 1.0;  // invariant: lo < hi, both finite
};

// Piecewise-constant density. Piece i (1-based, i = 1..c) spans
// [x_{i-1}, x_i) with x_0 = -inf, x_c = +inf and zero density on the two
// infinite tails. breaks holds x_1..x_{c-1}; densities holds the values on
// the c-2 finite pieces.
struct HistogramPdf {
    std::vector<double> breaks;
    std::vector<double> densities;
};

struct CdfPiece {
    double a = 0.0;  // F(x) = a*x + b on the piece
    double b = 0.0;
};

// Monotone piecewise-linear cdf. Piece i spans [break_{i-1}, break_i) with
// the outer pieces horizontal at 0 and 1.
class Cdf {
  public:
    Cdf() = default;
    Cdf(std::vector<double> breaks, std::vector<CdfPiece> pieces);

    double eval(double x) const;
    // Index of the piece whose half-open span contains x.
    int piece_index(double x) const;

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<CdfPiece>& pieces() const { return pieces_; }

  private:
    std::vector<double> breaks_;
    std::vector<CdfPiece> pieces_;  // size breaks_.size() + 1
};

struct UncertainPoint {
    int id = -1;
    std::variant<UniformPdf, HistogramPdf> pdf;
    Cdf cdf;
    // Support with zero-density edge pieces trimmed off.
    double support_lo = 0.0;
    double support_hi = 0.0;

    bool is_uniform() const { return std::holds_alternative<UniformPdf>(pdf); }
};

// Query interval [lo, hi]; either side may be infinite.
struct QueryInterval {
    double lo = -kInf;
    double hi = kInf;

    bool lo_bounded() const { return lo > -kInf; }
    bool hi_bounded() const { return hi < kInf; }
    bool bounded() const { return lo_bounded() && hi_bounded(); }
};

enum class SupportClass { L, R, M };

Cdf cdf_from_pdf(const UniformPdf& pdf);
Cdf cdf_from_pdf(const HistogramPdf& pdf);

// Validate and assemble a point; throws Error on invariant violations.
UncertainPoint make_point(int id, UniformPdf pdf);
UncertainPoint make_point(int id, HistogramPdf pdf);

QueryInterval make_interval(double lo, double hi);

// Pr[p in I] = F(hi) - F(lo), clamped into [0, 1].
double interval_probability(const UncertainPoint& p, const QueryInterval& I);

// L: I.lo <= lo(p); else R: I.hi >= hi(p); else M (I strictly inside the
// open support). Bounded intervals and uniform points only.
SupportClass classify(const UncertainPoint& p, const QueryInterval& I);

}  // namespace uqr
