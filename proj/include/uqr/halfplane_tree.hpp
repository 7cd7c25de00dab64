#pragma once

#include <utility>
#include <vector>

#include "uqr/counters.hpp"
#include "uqr/halfplane.hpp"

namespace uqr {

// Complete binary tree whose nodes each carry a LayeredHalfplaneIndex, plus a
// second level of fractional cascading across the tree: every node keeps a
// catalog sampling its own index's top breaks and both children's catalogs,
// so one binary search at the root positions every node met on a root-leaf
// descent.
//
// Three addressing modes share the machinery:
//   point_suffix  - one keyed line per leaf; a query keeps leaves with
//                   key >= q (the canonical right-hanging subtrees).
//   point_prefix  - mirrored, keeps leaves with key <= q.
//   interval      - lines live on x-spans; spans sit on canonical nodes and
//                   the cover is the root-leaf path of the query abscissa,
//                   so every stored line met is active there.
class HalfplaneTree {
  public:
    enum class Mode { point_suffix, point_prefix, interval };

    struct KeyedLine {
        double key;
        Line line;
    };
    // Line active on [x0, x1).
    struct SpanLine {
        double x0;
        double x1;
        Line line;
    };

    HalfplaneTree() = default;
    HalfplaneTree(Mode mode, std::vector<KeyedLine> entries);
    explicit HalfplaneTree(std::vector<SpanLine> spans);

    bool empty() const { return nodes_.empty(); }
    Mode mode() const { return mode_; }

    // The node indexes intersected by a query, each with its top-catalog
    // position at abscissa x. q is the key cut (ignored in interval mode).
    struct Cover {
        std::vector<std::pair<const LayeredHalfplaneIndex*, int>> nodes;
        int expanded = 0;
    };
    Cover locate(double q, double x, Counters& c) const;

    // Owners with height >= y at x among the covered lines, appended.
    void report_above(double q, double x, double y, std::vector<int>& out_owners,
                      Counters& c) const;
    // k highest covered lines at x; fewer come back when fewer exist.
    std::vector<Scored> topk_heap(double q, double x, int k, Counters& c) const;
    std::vector<Scored> topk_block(double q, double x, int k, int block, Counters& c) const;

  private:
    struct TreeEntry {
        double x;
        int own0;  // last own top-catalog entry with x' <= x, -1 if none
        int bl;    // same into left child's tree catalog
        int br;
    };
    struct Node {
        LayeredHalfplaneIndex idx;  // default-constructed when the node holds no lines
        std::vector<TreeEntry> tcat;
    };

    void finish_build(std::vector<std::vector<Line>> node_lines);
    void build_tcat(int v);
    int own_pos(int v, int t, double x, Counters& c) const;
    int child_pos(int v, int t, bool left_child, double x, Counters& c) const;
    void add_cover(int v, int t, double x, Cover& cov, Counters& c) const;

    Mode mode_ = Mode::interval;
    int leaves_ = 0;  // padded to a power of two
    std::vector<double> keys_;  // point modes: leaf keys, ascending
    std::vector<double> slab_;  // interval mode: slab boundaries, ascending
    std::vector<Node> nodes_;   // heap layout, root at 1, size 2 * leaves_
};

}  // namespace uqr
