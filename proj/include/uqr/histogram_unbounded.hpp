#pragma once

#include <vector>

#include "uqr/envelope.hpp"
#include "uqr/halfplane_tree.hpp"
#include "uqr/model.hpp"

namespace uqr {

// Histogram points, intervals with at least one infinite endpoint. The score
// of a point is its cdf at the finite endpoint (or one minus it), a monotone
// piecewise-linear curve. Every curve is clamped to one shared x-range with
// horizontal 0/1 rays, so top-1 reads a merged segment envelope while
// threshold and top-k walk an interval tree whose root-to-leaf path at the
// endpoint meets each point's active cdf piece exactly once.
class HistogramUnboundedIndex {
  public:
    explicit HistogramUnboundedIndex(std::vector<UncertainPoint> pts);

    size_t size() const { return pts_.size(); }
    const std::vector<UncertainPoint>& points() const { return pts_; }

    QueryResult top1(const QueryInterval& I) const;
    QueryResult topk(const QueryInterval& I, int k, Engine engine = Engine::auto_) const;
    QueryResult threshold(const QueryInterval& I, double tau) const;

  private:
    const UncertainPoint& by_id(int id) const;
    double prob(int id, const QueryInterval& I) const {
        return interval_probability(by_id(id), I);
    }
    // (tree, envelope, finite endpoint) for the bounded query side
    struct Side {
        const HalfplaneTree* tree;
        const SegmentEnvelope* env;
        double x;
    };
    Side pick_side(const QueryInterval& I) const;
    QueryResult all_certain(int cap) const;

    std::vector<UncertainPoint> pts_;
    std::vector<std::pair<int, size_t>> id_index_;  // sorted by id
    HalfplaneTree left_tree_;    // cdf pieces as span lines, scores F_p(hi)
    HalfplaneTree right_tree_;   // flipped pieces, scores 1 - F_p(lo)
    SegmentEnvelope left_env_;
    SegmentEnvelope right_env_;
    int min_id_ = -1;
};

}  // namespace uqr
