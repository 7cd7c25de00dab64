#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "uqr/counters.hpp"
#include "uqr/model.hpp"
#include "uqr/plane_envelope.hpp"

namespace uqr {

// One cdf piece pair of a point. When a bounded interval's endpoints land
// in pieces i and j, the interval probability is (aj*hi + bj) - (ai*lo + bi),
// grouped exactly the way interval_probability groups it, so the two agree
// bit for bit before clamping.
struct PoolPlane {
    double ai, bi, aj, bj;
    int owner;

    double value(double lo, double hi) const { return (aj * hi + bj) - (ai * lo + bi); }
    Plane3 projected() const { return {-ai, aj, bj - bi, owner}; }
};

// The planes stored at one node of the two-level range tree. Members are
// owner ascending with at most one plane per owner; the envelope for
// max-value lookups is built on first touch and shared by later queries.
class PlaneSet {
  public:
    int size() const { return int(ids_.size()); }
    const PoolPlane& member(int i) const { return (*pool_)[size_t(ids_[size_t(i)])]; }

    // The t highest values at (lo, hi), value descending then owner
    // ascending. t past the set size returns the whole set.
    std::vector<std::pair<double, int>> t_highest(double lo, double hi, int t, Counters& c) const;

    // A plane attaining the maximum value at (lo, hi). Exact ties on
    // envelope cell borders may pick either neighbour.
    const Plane3& locate_max(double lo, double hi, Counters& c) const;

    double member_value(int owner, double lo, double hi) const;

  private:
    friend class HistogramBoundedIndex;
    const std::vector<PoolPlane>* pool_ = nullptr;
    std::vector<int32_t> ids_;
    mutable std::once_flag once_;
    mutable std::unique_ptr<ProjectedPlaneEnvelope> env_;
};

// Rank access into one candidate source: at(r) is the (r+1)-th largest
// (value, owner) pair under value descending, owner ascending order.
class RankedSet {
  public:
    virtual ~RankedSet() = default;
    virtual int size() const = 0;
    virtual std::pair<double, int> at(int rank, Counters& c) = 0;
};

// Exact k highest pairs across the sources, value descending then owner
// ascending. Every source starts with a prefix of lambda entries; a
// max-heap over prefix minima picks which source to consume, consumed
// sources double their prefix, and the merge stops once the union of
// consumed prefixes reaches k entries. Ties at the cut are drained from
// each source so the result is canonical.
std::vector<std::pair<double, int>> doubling_topk(const std::vector<RankedSet*>& sets, int k,
                                                  int lambda, Counters& c);

// Histogram points, bounded query intervals. Every piece pair of every
// point contributes one plane over (lo, hi) space, valid on the rectangle
// of endpoint positions that select that pair. Rectangles live in a range
// tree: an outer segment tree over lo-breakpoints whose nodes hold inner
// segment trees over hi-breakpoints. The two root-to-leaf walks for a query
// cross exactly one plane per point, spread over O(log^2) sets.
class HistogramBoundedIndex {
  public:
    explicit HistogramBoundedIndex(std::vector<UncertainPoint> pts);

    size_t size() const { return pts_.size(); }
    const std::vector<UncertainPoint>& points() const { return pts_; }

    QueryResult top1(const QueryInterval& I) const;
    QueryResult topk(const QueryInterval& I, int k, Engine engine = Engine::auto_) const;
    QueryResult threshold(const QueryInterval& I, double tau) const;

    // The sets whose union holds exactly one plane per point for I.
    std::vector<const PlaneSet*> canonical_sets(const QueryInterval& I, Counters& c) const;

  private:
    struct InnerTree {
        std::vector<double> bounds;  // finite hi-endpoints of staged rectangles
        int pow2 = 1;
        std::vector<int32_t> set_at;  // per node, -1 or an index into sets_
    };

    const UncertainPoint& by_id(int id) const;
    double prob(int id, const QueryInterval& I) const {
        return interval_probability(by_id(id), I);
    }
    void require_bounded(const QueryInterval& I) const;

    std::vector<UncertainPoint> pts_;
    std::vector<std::pair<int, size_t>> id_index_;
    std::vector<PoolPlane> pool_;
    std::vector<double> xbounds_;  // global lo-breakpoints
    int xpow2_ = 1;
    std::vector<std::unique_ptr<InnerTree>> outer_;
    std::deque<PlaneSet> sets_;  // stable addresses; PlaneSet is pinned by once_flag
    int min_id_ = -1;
};

}  // namespace uqr
