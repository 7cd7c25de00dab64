#include "uqr/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uqr {

Cdf::Cdf(std::vector<double> breaks, std::vector<CdfPiece> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    check(pieces_.size() == breaks_.size() + 1, "cdf piece/break count");
}

int Cdf::piece_index(double x) const {
    // Half-open pieces: x == break_i belongs to the piece on the right.
    return int(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
}

double Cdf::eval(double x) const {
    if (!std::isfinite(x)) return x > 0 ? 1.0 : 0.0;
    const CdfPiece& p = pieces_[size_t(piece_index(x))];
    return p.a * x + p.b;
}

Cdf cdf_from_pdf(const UniformPdf& pdf) {
    double a = 1.0 / (pdf.hi - pdf.lo);
    double b = -(a * pdf.lo);
    return Cdf({pdf.lo, pdf.hi}, {{0.0, 0.0}, {a, b}, {0.0, 1.0}});
}

Cdf cdf_from_pdf(const HistogramPdf& pdf) {
    std::vector<CdfPiece> pieces;
    pieces.reserve(pdf.breaks.size() + 1);
    pieces.push_back({0.0, 0.0});
    double mass = 0.0;  // F at the left end of the current piece
    for (size_t i = 0; i + 1 < pdf.breaks.size(); ++i) {
        double d = pdf.densities[i];
        pieces.push_back({d, mass - d * pdf.breaks[i]});
        mass += d * (pdf.breaks[i + 1] - pdf.breaks[i]);
    }
    pieces.push_back({0.0, 1.0});
    return Cdf(pdf.breaks, std::move(pieces));
}

UncertainPoint make_point(int id, UniformPdf pdf) {
    if (!std::isfinite(pdf.lo) || !std::isfinite(pdf.hi))
        fail(Errc::invalid_pdf, "uniform support must be finite");
    if (!(pdf.lo < pdf.hi))
        fail(Errc::invalid_pdf, "uniform support must have positive width (point masses rejected)");
    UncertainPoint p;
    p.id = id;
    p.support_lo = pdf.lo;
    p.support_hi = pdf.hi;
    p.cdf = cdf_from_pdf(pdf);
    p.pdf = pdf;
    return p;
}

UncertainPoint make_point(int id, HistogramPdf pdf) {
    if (pdf.breaks.size() < 2) fail(Errc::invalid_pdf, "histogram needs at least one finite piece");
    if (pdf.breaks.size() + 1 > size_t(kMaxHistogramPieces))
        fail(Errc::too_many_pieces, "histogram piece count exceeds maximum");
    if (pdf.densities.size() + 1 != pdf.breaks.size())
        fail(Errc::invalid_pdf, "histogram needs one density per finite piece");
    for (double x : pdf.breaks)
        if (!std::isfinite(x)) fail(Errc::invalid_pdf, "histogram break must be finite");
    for (size_t i = 0; i + 1 < pdf.breaks.size(); ++i)
        if (!(pdf.breaks[i] < pdf.breaks[i + 1]))
            fail(Errc::non_ascending_breaks, "histogram breaks must be strictly ascending");
    double mass = 0.0;
    for (size_t i = 0; i < pdf.densities.size(); ++i) {
        double d = pdf.densities[i];
        if (!std::isfinite(d) || d < 0.0) fail(Errc::invalid_pdf, "histogram density must be >= 0");
        mass += d * (pdf.breaks[i + 1] - pdf.breaks[i]);
    }
    if (std::abs(mass - 1.0) > kMassTolerance) fail(Errc::mass_not_one, "histogram mass must be 1");

    size_t first = 0;
    while (first < pdf.densities.size() && pdf.densities[first] == 0.0) ++first;
    size_t last = pdf.densities.size();
    while (last > first && pdf.densities[last - 1] == 0.0) --last;

    UncertainPoint p;
    p.id = id;
    p.support_lo = pdf.breaks[first];
    p.support_hi = pdf.breaks[last];
    p.cdf = cdf_from_pdf(pdf);
    p.pdf = std::move(pdf);
    return p;
}

QueryInterval make_interval(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi)) fail(Errc::bad_interval, "interval endpoint is NaN");
    if (!(lo <= hi)) fail(Errc::bad_interval, "interval needs lo <= hi");
    return QueryInterval{lo, hi};
}

double interval_probability(const UncertainPoint& p, const QueryInterval& I) {
    double pr = p.cdf.eval(I.hi) - p.cdf.eval(I.lo);
    return std::min(1.0, std::max(0.0, pr));
}

SupportClass classify(const UncertainPoint& p, const QueryInterval& I) {
    if (!p.is_uniform()) fail(Errc::not_uniform, "classify expects a uniform point");
    if (!I.bounded()) fail(Errc::unbounded_interval, "classify expects a bounded interval");
    const UniformPdf& u = std::get<UniformPdf>(p.pdf);
    if (I.lo <= u.lo) return SupportClass::L;
    if (I.hi >= u.hi) return SupportClass::R;
    return SupportClass::M;
}

}  // namespace uqr
