#pragma once

#include <utility>
#include <vector>

#include "uqr/counters.hpp"

namespace uqr {

// Static planar dominance minimum: the smallest (w, id) pair over an
// axis-aligned quadrant of weighted points. A segment tree over x-sorted
// points; each node keeps its points y-sorted with prefix and suffix
// minima, so a query is one x boundary search plus one y search per
// canonical node.
class DominanceMinIndex {
  public:
    enum class Rel { le, lt, ge, gt };
    struct Pt {
        double x, y, w;
        int id;
    };

    DominanceMinIndex() = default;
    explicit DominanceMinIndex(std::vector<Pt> pts);

    // Smallest (w, id) among points with x <xrel> qx and y <yrel> qy;
    // {inf, -1} when the quadrant is empty.
    std::pair<double, int> min_over(double qx, Rel xrel, double qy, Rel yrel, Counters& c) const;

  private:
    struct Entry {
        double y, w;
        int id;
    };
    struct Node {
        std::vector<Entry> ys;                      // ascending in y
        std::vector<std::pair<double, int>> pref;   // min (w,id) over ys[0..i]
        std::vector<std::pair<double, int>> suff;   // min (w,id) over ys[i..)
    };

    void visit(int v, int nlo, int nhi, int lo, int hi, double qy, Rel yrel,
               std::pair<double, int>& best, Counters& c) const;

    int leaves_ = 0;
    std::vector<double> xs_;  // leaf x keys, ascending
    std::vector<Node> nodes_;
};

}  // namespace uqr
