#pragma once

#include <utility>
#include <vector>

#include "uqr/counters.hpp"

namespace uqr {

// Max-z queries over the open quadrant lo < qlo, hi > qhi. A segment tree
// over lo-sorted points; each node keeps its points hi-descending with a
// sparse-table argmax on (z desc, id asc), so the quadrant restricted to a
// canonical node is a prefix and any sub-range's best point is two table
// reads. Enumeration splits ranges at the popped argmax, which yields the
// quadrant's points in exact (z desc, id asc) order.
class ZMaxTree {
  public:
    struct Pt {
        double lo, hi, z;
        int id;
    };

    ZMaxTree() = default;
    explicit ZMaxTree(std::vector<Pt> pts);

    // Best (z, id) in the quadrant; {-inf, -1} when it is empty.
    std::pair<double, int> top1(double qlo, double qhi, Counters& c) const;

    // First min(k, quadrant size) points in (z desc, id asc) order.
    std::vector<std::pair<double, int>> topk(double qlo, double qhi, int k, Counters& c) const;

    // Same result as topk, via block-buffered streams of width h.
    std::vector<std::pair<double, int>> topk_block(double qlo, double qhi, int k, int h,
                                                   Counters& c) const;

    // Appends ids of all quadrant points with z >= zmin.
    void report_geq(double qlo, double qhi, double zmin, std::vector<int>& out,
                    Counters& c) const;

  private:
    friend class ZMaxNodeStream;

    struct Node {
        std::vector<double> his;  // descending
        std::vector<double> zs;
        std::vector<int> ids;
        // table[j] holds the argmax position of each window of length 1<<j
        std::vector<std::vector<int>> table;
    };
    // Unemitted sub-range [lo, hi) of one node's prefix and its best point.
    struct Range {
        double z;
        int id, node, lo, hi, pos;
    };

    static bool range_worse(const Range& a, const Range& b);
    int region_len(const Node& nd, double qhi, Counters& c) const;
    bool make_range(int node, int lo, int hi, Range& out, Counters& c) const;
    void cover(int v, int nlo, int nhi, int lo, int hi, std::vector<int>& out) const;
    std::vector<Range> seeds(double qlo, double qhi, Counters& c) const;
    // Pops the best unemitted point and re-seeds the split halves.
    bool iter_pop(std::vector<Range>& heap, std::pair<double, int>& out, Counters& c) const;

    int leaves_ = 0;
    std::vector<double> los_;  // leaf lo keys, ascending
    std::vector<Node> nodes_;
};

}  // namespace uqr
