#pragma once

#include <vector>

#include "uqr/halfplane.hpp"
#include "uqr/min_id.hpp"
#include "uqr/model.hpp"

namespace uqr {

// Uniform points, intervals with at least one infinite endpoint. Scores are
// affine in the finite endpoint, so each query side is a layered half-plane
// index; reported probabilities always come from the model.
class UniformUnboundedIndex {
  public:
    explicit UniformUnboundedIndex(std::vector<UncertainPoint> pts);

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
    // (index to query, finite endpoint, min id of the probability-one set)
    struct Side {
        const LayeredHalfplaneIndex* idx;
        double x;
        int prob1_id;
    };
    Side pick_side(const QueryInterval& I) const;
    QueryResult all_certain(int cap) const;  // every point has probability 1

    std::vector<UncertainPoint> pts_;
    std::vector<std::pair<int, size_t>> id_index_;  // sorted by id
    LayeredHalfplaneIndex left_;                    // scores F_p(hi) for (-inf, hi]
    LayeredHalfplaneIndex right_;                   // scores 1 - F_p(lo) for [lo, +inf)
    MinIdByKey hi_minid_;
    MinIdByKey lo_minid_;
    int min_id_ = -1;
};

}  // namespace uqr
