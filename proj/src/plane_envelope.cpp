#include "uqr/plane_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uqr/error.hpp"

namespace uqr {

namespace {

constexpr size_t kLinearCutoff = 8;

struct P2 {
    double x, y;
};

// Keep the side where da*x + db*y + dg >= 0.
std::vector<P2> clip_halfplane(const std::vector<P2>& poly, double da, double db, double dg) {
    std::vector<P2> out;
    out.reserve(poly.size() + 2);
    size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        const P2& v = poly[i];
        const P2& w = poly[(i + 1) % m];
        double fv = da * v.x + db * v.y + dg;
        double fw = da * w.x + db * w.y + dg;
        bool inv = fv >= 0.0;
        bool inw = fw >= 0.0;
        if (inv) out.push_back(v);
        if (inv != inw) {
            double t = fv / (fv - fw);
            out.push_back({v.x + t * (w.x - v.x), v.y + t * (w.y - v.y)});
        }
    }
    return out;
}

uint32_t mix_priority(uint64_t v) {
    v += 0x9e3779b97f4a7c15ull;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return uint32_t(v ^ (v >> 31));
}

}  // namespace

ProjectedPlaneEnvelope::ProjectedPlaneEnvelope(std::vector<Plane3> planes) {
    std::sort(planes.begin(), planes.end(), [](const Plane3& a, const Plane3& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.beta != b.beta) return a.beta < b.beta;
        if (a.gamma != b.gamma) return a.gamma < b.gamma;
        return a.owner < b.owner;
    });
    for (const Plane3& p : planes) {
        if (!reps_.empty()) {
            const Plane3& q = reps_.back();
            if (q.alpha == p.alpha && q.beta == p.beta && q.gamma == p.gamma) continue;
        }
        reps_.push_back(p);
    }
    if (reps_.empty()) fail(Errc::empty_set, "plane envelope needs at least one plane");
    if (reps_.size() <= kLinearCutoff) {
        linear_ = true;
        return;
    }

    // Cut each plane's maximization cell out of the box. A cell empties as
    // soon as one rival dominates it over the remaining polygon.
    struct Ev {
        double x;
        int type;  // 0 remove, 1 insert; removals first at a shared boundary
        int plane;
    };
    std::vector<Ev> evs;
    std::vector<P2> poly;
    const int n = int(reps_.size());
    for (int i = 0; i < n; ++i) {
        const Plane3& pi = reps_[size_t(i)];
        poly.assign({{-kPlaneBox, -kPlaneBox},
                     {kPlaneBox, -kPlaneBox},
                     {kPlaneBox, kPlaneBox},
                     {-kPlaneBox, kPlaneBox}});
        for (int j = 0; j < n && !poly.empty(); ++j) {
            if (j == i) continue;
            const Plane3& pj = reps_[size_t(j)];
            double da = pi.alpha - pj.alpha;
            double db = pi.beta - pj.beta;
            double dg = pi.gamma - pj.gamma;
            if (da == 0.0 && db == 0.0) {
                // Parallel pair: one side dominates the whole box.
                if (dg < 0.0 || (dg == 0.0 && pi.owner > pj.owner)) poly.clear();
                continue;
            }
            poly = clip_halfplane(poly, da, db, dg);
        }
        if (poly.size() < 3) continue;
        double x0 = poly[0].x, x1 = poly[0].x;
        for (const P2& v : poly) {
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
        }
        if (!(x1 > x0)) continue;
        ++cells_;
        evs.push_back({x0, 1, i});
        evs.push_back({x1, 0, i});
    }
    if (cells_ == 0) {
        // All surviving regions were slivers; fall back to scanning.
        linear_ = true;
        return;
    }

    std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.type != b.type) return a.type < b.type;
        return a.plane < b.plane;
    });
    xs_.reserve(evs.size());
    for (const Ev& e : evs)
        if (xs_.empty() || xs_.back() != e.x) xs_.push_back(e.x);

    arena_.reserve(size_t(cells_) * 40);
    roots_.assign(xs_.size() - 1, -1);
    int root = -1;
    size_t e = 0;
    for (size_t s = 0; s + 1 < xs_.size(); ++s) {
        while (e < evs.size() && evs[e].x == xs_[s]) {
            root = evs[e].type ? insert(root, evs[e].plane) : remove(root, evs[e].plane);
            ++e;
        }
        roots_[s] = root;
    }
}

int ProjectedPlaneEnvelope::make_node(int plane) {
    arena_.push_back({plane, -1, -1, plane, plane, mix_priority(uint64_t(plane))});
    return int(arena_.size()) - 1;
}

int ProjectedPlaneEnvelope::cloned(int t) {
    arena_.push_back(arena_[size_t(t)]);
    return int(arena_.size()) - 1;
}

void ProjectedPlaneEnvelope::pull(int t) {
    Node& nd = arena_[size_t(t)];
    nd.lo = nd.l >= 0 ? arena_[size_t(nd.l)].lo : nd.plane;
    nd.hi = nd.r >= 0 ? arena_[size_t(nd.r)].hi : nd.plane;
}

int ProjectedPlaneEnvelope::merge(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    if (arena_[size_t(a)].pri >= arena_[size_t(b)].pri) {
        int m = cloned(a);
        int sub = merge(arena_[size_t(m)].r, b);
        arena_[size_t(m)].r = sub;
        pull(m);
        return m;
    }
    int m = cloned(b);
    int sub = merge(a, arena_[size_t(m)].l);
    arena_[size_t(m)].l = sub;
    pull(m);
    return m;
}

void ProjectedPlaneEnvelope::split(int t, double beta, int owner, bool incl, int& l, int& r) {
    if (t < 0) {
        l = r = -1;
        return;
    }
    const Plane3& p = reps_[size_t(arena_[size_t(t)].plane)];
    bool less = p.beta < beta || (p.beta == beta && p.owner < owner);
    bool leq = p.beta < beta || (p.beta == beta && p.owner <= owner);
    if (incl ? leq : less) {
        int m = cloned(t);
        int a, b;
        split(arena_[size_t(m)].r, beta, owner, incl, a, b);
        arena_[size_t(m)].r = a;
        pull(m);
        l = m;
        r = b;
    } else {
        int m = cloned(t);
        int a, b;
        split(arena_[size_t(m)].l, beta, owner, incl, a, b);
        arena_[size_t(m)].l = b;
        pull(m);
        l = a;
        r = m;
    }
}

int ProjectedPlaneEnvelope::insert(int root, int plane) {
    const Plane3& p = reps_[size_t(plane)];
    int a, b;
    split(root, p.beta, p.owner, false, a, b);
    return merge(merge(a, make_node(plane)), b);
}

int ProjectedPlaneEnvelope::remove(int root, int plane) {
    const Plane3& p = reps_[size_t(plane)];
    int a, rest, mid, b;
    split(root, p.beta, p.owner, false, a, rest);
    split(rest, p.beta, p.owner, true, mid, b);
    (void)mid;
    return merge(a, b);
}

double ProjectedPlaneEnvelope::cross_y(const Plane3& p, const Plane3& q, double x) const {
    double d = q.beta - p.beta;
    if (!(d > 0.0)) {
        // Equal-beta neighbours only appear transiently; order by value.
        return p.eval(x, 0.0) >= q.eval(x, 0.0) ? std::numeric_limits<double>::infinity()
                                                : -std::numeric_limits<double>::infinity();
    }
    return ((p.alpha - q.alpha) * x + (p.gamma - q.gamma)) / d;
}

const Plane3& ProjectedPlaneEnvelope::linear_scan(double x, double y, Counters& c) const {
    size_t best = 0;
    double bz = reps_[0].eval(x, y);
    for (size_t i = 1; i < reps_.size(); ++i) {
        ++c.comparisons;
        double z = reps_[i].eval(x, y);
        if (z > bz || (z == bz && reps_[i].owner < reps_[best].owner)) {
            best = i;
            bz = z;
        }
    }
    return reps_[best];
}

const Plane3& ProjectedPlaneEnvelope::locate(double x, double y, Counters& c) const {
    x = std::min(std::max(x, -kPlaneBox), kPlaneBox);
    y = std::min(std::max(y, -kPlaneBox), kPlaneBox);
    if (linear_) return linear_scan(x, y, c);

    ++c.binary_searches;
    long s = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
    s = std::min(std::max(s, 0L), long(roots_.size()) - 1);
    int t = roots_[size_t(s)];
    if (t < 0) return linear_scan(x, y, c);
    for (;;) {
        const Node& nd = arena_[size_t(t)];
        if (nd.l >= 0) {
            const Plane3& below = reps_[size_t(arena_[size_t(nd.l)].hi)];
            ++c.comparisons;
            if (y < cross_y(below, reps_[size_t(nd.plane)], x)) {
                t = nd.l;
                continue;
            }
        }
        if (nd.r >= 0) {
            const Plane3& above = reps_[size_t(arena_[size_t(nd.r)].lo)];
            ++c.comparisons;
            if (y >= cross_y(reps_[size_t(nd.plane)], above, x)) {
                t = nd.r;
                continue;
            }
        }
        return reps_[size_t(nd.plane)];
    }
}

}  // namespace uqr
