#pragma once

#include <vector>

#include "uqr/dominance.hpp"
#include "uqr/halfplane_tree.hpp"
#include "uqr/model.hpp"
#include "uqr/persistent_envelope.hpp"
#include "uqr/zmax_tree.hpp"

namespace uqr {

// Uniform points, bounded query intervals. A point relates to [lo, hi] in
// one of three ways: its support starts inside (probability is its cdf at
// hi), ends inside (one minus its cdf at lo), or strictly straddles the
// interval (density times width). Each case gets its own structure, keyed
// so the relevant points form a contiguous key range: half-plane trees and
// persistent envelopes for the two cdf cases, a z-max tree and dominance
// indexes for the straddling case and the certain set.
class UniformBoundedIndex {
  public:
    explicit UniformBoundedIndex(std::vector<UncertainPoint> pts);

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
    void require_bounded(const QueryInterval& I) const;

    std::vector<UncertainPoint> pts_;
    std::vector<std::pair<int, size_t>> id_index_;  // sorted by id

    HalfplaneTree tl_;        // key lo(p), line = middle cdf piece, scores F_p(hi)
    HalfplaneTree tr_;        // key hi(p), line flipped, scores 1 - F_p(lo)
    PersistentEnvelope envl_;  // suffix envelopes of tl_'s lines in key order
    PersistentEnvelope envr_;  // prefix envelopes of tr_'s lines in key order
    std::vector<double> los_sorted_;
    std::vector<double> his_sorted_;
    DominanceMinIndex certain_;   // min id with lo(p) >= qlo, hi(p) <= qhi
    DominanceMinIndex straddle_;  // min (-density, id) with lo(p) < qlo, hi(p) > qhi
    ZMaxTree zmax_;               // same quadrant, enumerable by density
    int min_id_ = -1;
};

}  // namespace uqr
