#pragma once

#include <vector>

#include "uqr/counters.hpp"

namespace uqr {

// z = alpha*x + beta*y + gamma, tagged with the point that produced it.
struct Plane3 {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int owner = -1;

    double eval(double x, double y) const { return alpha * x + beta * y + gamma; }
};

// Everything is clipped to [-kPlaneBox, kPlaneBox] squared; queries are
// clamped into the box, so coordinates must stay well inside it.
inline constexpr double kPlaneBox = 1e8;

// Upper envelope of planes over the clip box, queried by point location.
//
// Each plane's maximization cell is cut out of the box with half-plane
// clipping, then the cells are swept left to right: slab boundaries are the
// cell x-extents, and a persistent treap keyed by beta snapshots the planes
// alive in each slab. A locate walks two searches, slab then treap, where
// the treap descent compares the query y against the crossing line of
// beta-adjacent planes at the query x.
//
// locate returns a plane attaining the maximum at (x, y). On exact cell
// borders the winner between the tied neighbours is unspecified; callers
// that need canonical ties re-rank the owner through exact per-point
// evaluation. Sets at or below the linear cutoff skip the sweep and scan,
// which does break ties by owner.
class ProjectedPlaneEnvelope {
  public:
    explicit ProjectedPlaneEnvelope(std::vector<Plane3> planes);

    const Plane3& locate(double x, double y, Counters& c) const;

    int plane_count() const { return int(reps_.size()); }
    int cell_count() const { return cells_; }

  private:
    struct Node {
        int plane;  // index into reps_
        int l, r;
        int lo, hi;  // subtree extremes in (beta, owner) order
        uint32_t pri;
    };

    int make_node(int plane);
    int cloned(int t);
    void pull(int t);
    int merge(int a, int b);
    // incl == false: keys < (beta, owner) go left. incl == true: keys <= go left.
    void split(int t, double beta, int owner, bool incl, int& l, int& r);
    int insert(int root, int plane);
    int remove(int root, int plane);
    double cross_y(const Plane3& p, const Plane3& q, double x) const;
    const Plane3& linear_scan(double x, double y, Counters& c) const;

    std::vector<Plane3> reps_;   // deduped, owner ascending per identical triple
    std::vector<double> xs_;     // slab boundaries (cell x-extent endpoints)
    std::vector<int> roots_;     // treap version per interior slab
    std::vector<Node> arena_;
    int cells_ = 0;
    bool linear_ = false;
};

}  // namespace uqr
