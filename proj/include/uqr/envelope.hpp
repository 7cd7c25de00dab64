#pragma once

#include <vector>

#include "uqr/counters.hpp"
#include "uqr/error.hpp"

namespace uqr {

// y = a*x + b tagged with the uncertain point (owner) and cdf piece it came from.
struct Line {
    double a = 0.0;
    double b = 0.0;
    int owner = -1;
    int piece = 0;
    int slot = -1;  // position in the deduplicated order, set by dedup_lines

    double eval(double x) const { return a * x + b; }
};

inline bool same_line(const Line& p, const Line& q) { return p.a == q.a && p.b == q.b; }

// Collapse exact (a,b) duplicates. The kept representative carries the
// smallest owner id; owners[i] lists every owner of lines[i], ascending,
// de-duplicated (a point can contribute one line twice through zero-density
// pieces).
struct DedupResult {
    std::vector<Line> lines;
    std::vector<std::vector<int>> owners;
};

DedupResult dedup_lines(std::vector<Line> lines);

// Upper envelope, left to right. lines[i] is the topmost line on
// [breaks[i-1], breaks[i]); breaks has size lines.size() - 1.
struct EnvelopeChain {
    std::vector<Line> lines;
    std::vector<double> breaks;

    size_t size() const { return lines.size(); }
    // Topmost line at x; at a break the right piece wins.
    int top_piece(double x) const;
    double eval(double x) const { return lines[size_t(top_piece(x))].eval(x); }
};

// (a,b) must be pairwise distinct; run dedup_lines first.
EnvelopeChain upper_envelope(std::vector<Line> lines);

// Onion peeling: layer 0 is the upper envelope of everything, layer i the
// envelope of what the first i layers left over. Every line lands in exactly
// one layer. One sort up front, then a linear scan per layer.
std::vector<EnvelopeChain> peel_layers(std::vector<Line> lines);

// Fractional cascading over the layers' break lists: one binary search at
// the top, O(1) bridge steps per layer below.
class CascadeBridges {
  public:
    struct Entry {
        double x;       // position is valid for queries in [x, next.x)
        int own_piece;  // top piece of this layer at x
        int bridge;     // catalog index in the next layer, -1 on the last
    };

    CascadeBridges() = default;
    explicit CascadeBridges(const std::vector<EnvelopeChain>& layers);

    // Fixed-x walk down the layers, one layer at a time.
    class Walk {
      public:
        int layer() const { return layer_; }
        int piece() const;
        int catalog_pos() const { return pos_; }
        bool last_layer() const;
        void descend(Counters& c);

      private:
        friend class CascadeBridges;
        const CascadeBridges* cb_ = nullptr;
        double x_ = 0.0;
        int layer_ = 0;
        int pos_ = 0;
    };

    Walk walk_from_top(double x, Counters& c) const;
    // Seeded variant for cross-structure cascading: pos0 must be at (or just
    // left of) the top-catalog position for x.
    Walk walk_at(int pos0, double x, Counters& c) const;

    int layer_count() const { return int(catalogs_.size()); }
    const std::vector<Entry>& top_catalog() const { return catalogs_.front(); }

  private:
    std::vector<std::vector<Entry>> catalogs_;
};

// y = a*x + b restricted to [x0, x1].
struct Segment {
    double x0 = 0.0;
    double x1 = 0.0;
    double a = 0.0;
    double b = 0.0;
    int owner = -1;
    int piece = 0;

    double eval(double x) const { return a * x + b; }
};

// Upper envelope of complete piecewise-linear curves over one shared
// x-range, merged divide-and-conquer. Ties prefer the smaller owner id.
class SegmentEnvelope {
  public:
    SegmentEnvelope() = default;

    // Every curve must cover the same [lo, hi] contiguously.
    static SegmentEnvelope build(const std::vector<std::vector<Segment>>& curves);

    double lo() const { return pieces_.front().x0; }
    double hi() const { return pieces_.back().x1; }
    const std::vector<Segment>& pieces() const { return pieces_; }
    // Topmost piece at x (x clamped into [lo, hi]); one binary search.
    const Segment& locate(double x, Counters& c) const;

  private:
    std::vector<Segment> pieces_;
};

namespace detail {

// Last index whose key is <= x in an ascending sequence, -1 if none.
// One comparison counted per probe.
template <class Vec, class Key>
int last_leq(const Vec& v, double x, Key key, Counters& c) {
    int lo = 0, hi = int(v.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        ++c.comparisons;
        if (key(v[size_t(mid)]) <= x)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo - 1;
}

}  // namespace detail

}  // namespace uqr
