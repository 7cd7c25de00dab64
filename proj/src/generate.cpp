#include "uqr/generate.hpp"

#include <charconv>

#include "uqr/error.hpp"

namespace uqr {

std::vector<UncertainPoint> gen_uniform_points(int n, std::uint64_t seed) {
    if (n < 1) fail(Errc::empty_input, "instance needs at least one point");
    std::mt19937_64 rng(seed);
    std::vector<UncertainPoint> pts;
    pts.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        double lo = -100.0 + 200.0 * unit_real(rng);
        double width = 0.05 + 20.0 * unit_real(rng);
        pts.push_back(make_point(i + 1, UniformPdf{lo, lo + width}));
    }
    return pts;
}

std::vector<UncertainPoint> gen_histogram_points(int n, int pieces, std::uint64_t seed) {
    if (n < 1) fail(Errc::empty_input, "instance needs at least one point");
    if (pieces < 1 || pieces > kMaxHistogramPieces)
        fail(Errc::too_many_pieces, "piece count out of range");
    std::mt19937_64 rng(seed);
    std::vector<UncertainPoint> pts;
    pts.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        HistogramPdf pdf;
        double x = -100.0 + 200.0 * unit_real(rng);
        pdf.breaks.push_back(x);
        for (int j = 0; j < pieces; ++j) {
            x += 0.05 + 5.0 * unit_real(rng);
            pdf.breaks.push_back(x);
        }
        // Random weights, occasionally zeroed so interior dead pieces show up,
        // normalized to unit mass. Endpoint pieces stay positive to keep the
        // support equal to [breaks.front(), breaks.back()].
        std::vector<double> w(size_t(pieces), 0.0);
        double mass = 0.0;
        for (int j = 0; j < pieces; ++j) {
            double v = unit_real(rng);
            bool interior = j > 0 && j + 1 < pieces;
            w[size_t(j)] = (interior && v < 0.25) ? 0.0 : 0.05 + v;
            mass += w[size_t(j)] * (pdf.breaks[size_t(j) + 1] - pdf.breaks[size_t(j)]);
        }
        pdf.densities.resize(size_t(pieces));
        for (int j = 0; j < pieces; ++j) pdf.densities[size_t(j)] = w[size_t(j)] / mass;
        pts.push_back(make_point(i + 1, std::move(pdf)));
    }
    return pts;
}

bool looks_like_gen_spec(const std::string& s) { return s.rfind("rand-", 0) == 0; }

namespace {

int spec_int(const std::string& s, size_t from, size_t to) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + from, s.data() + to, v);
    if (ec != std::errc() || p != s.data() + to || v < 1)
        fail(Errc::parse_error, "bad generator spec '" + s + "'");
    return v;
}

// N or A..B, doubling.
std::vector<int> spec_sizes(const std::string& s, size_t from, size_t to) {
    size_t dots = s.find("..", from);
    if (dots == std::string::npos || dots >= to) return {spec_int(s, from, to)};
    int a = spec_int(s, from, dots);
    int b = spec_int(s, dots + 2, to);
    if (b < a) fail(Errc::parse_error, "bad generator spec '" + s + "'");
    std::vector<int> sizes;
    for (long v = a; v <= b; v *= 2) sizes.push_back(int(v));
    return sizes;
}

}  // namespace

GenSpec parse_gen_spec(const std::string& s) {
    GenSpec spec;
    size_t body;
    if (s.rfind("rand-uniform:", 0) == 0) {
        body = sizeof "rand-uniform:" - 1;
    } else if (s.rfind("rand-hist:", 0) == 0) {
        spec.histogram = true;
        body = sizeof "rand-hist:" - 1;
    } else {
        fail(Errc::parse_error, "bad generator spec '" + s + "'");
    }
    size_t end = s.size();
    if (spec.histogram) {
        size_t colon = s.rfind(':');
        if (colon < body) fail(Errc::parse_error, "bad generator spec '" + s + "'");
        spec.pieces = spec_int(s, colon + 1, s.size());
        if (spec.pieces > kMaxHistogramPieces)
            fail(Errc::parse_error, "bad generator spec '" + s + "'");
        end = colon;
    }
    spec.sizes = spec_sizes(s, body, end);
    return spec;
}

}  // namespace uqr
