#include "uqr/dominance.hpp"

#include <algorithm>
#include <limits>

#include "uqr/error.hpp"

namespace uqr {

namespace {

const std::pair<double, int> kNone{std::numeric_limits<double>::infinity(), -1};

void mini(std::pair<double, int>& best, const std::pair<double, int>& v, Counters& c) {
    ++c.comparisons;
    if (v.second >= 0 && v < best) best = v;
}

// counted lower/upper bound over Entry.y
template <bool Strict, class E>
int y_bound(const std::vector<E>& ys, double qy, Counters& c) {
    int lo = 0, hi = int(ys.size());
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        ++c.comparisons;
        const bool go_right = Strict ? ys[size_t(mid)].y <= qy : ys[size_t(mid)].y < qy;
        if (go_right)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

DominanceMinIndex::DominanceMinIndex(std::vector<Pt> pts) {
    if (pts.empty()) fail(Errc::empty_input, "dominance index over zero points");
    std::sort(pts.begin(), pts.end(), [](const Pt& p, const Pt& q) {
        if (p.x != q.x) return p.x < q.x;
        return p.id < q.id;
    });
    const int n = int(pts.size());
    leaves_ = 1;
    while (leaves_ < n) leaves_ <<= 1;
    xs_.reserve(size_t(n));
    for (const Pt& p : pts) xs_.push_back(p.x);

    nodes_.resize(size_t(2 * leaves_));
    for (int i = 0; i < n; ++i)
        nodes_[size_t(leaves_ + i)].ys.push_back({pts[size_t(i)].y, pts[size_t(i)].w,
                                                  pts[size_t(i)].id});
    for (int v = leaves_ - 1; v >= 1; --v) {
        const auto& a = nodes_[size_t(2 * v)].ys;
        const auto& b = nodes_[size_t(2 * v + 1)].ys;
        auto& m = nodes_[size_t(v)].ys;
        m.resize(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), m.begin(),
                   [](const Entry& p, const Entry& q) {
                       if (p.y != q.y) return p.y < q.y;
                       return p.id < q.id;
                   });
    }
    for (Node& nd : nodes_) {
        const size_t m = nd.ys.size();
        if (m == 0) continue;
        nd.pref.resize(m);
        nd.suff.resize(m);
        std::pair<double, int> run = kNone;
        for (size_t i = 0; i < m; ++i) {
            run = std::min(run, {nd.ys[i].w, nd.ys[i].id});
            nd.pref[i] = run;
        }
        run = kNone;
        for (size_t i = m; i-- > 0;) {
            run = std::min(run, {nd.ys[i].w, nd.ys[i].id});
            nd.suff[i] = run;
        }
    }
}

void DominanceMinIndex::visit(int v, int nlo, int nhi, int lo, int hi, double qy, Rel yrel,
                              std::pair<double, int>& best, Counters& c) const {
    if (hi <= nlo || nhi <= lo) return;
    if (lo <= nlo && nhi <= hi) {
        const Node& nd = nodes_[size_t(v)];
        if (nd.ys.empty()) return;
        ++c.binary_searches;
        switch (yrel) {
            case Rel::le: {
                const int i = y_bound<true>(nd.ys, qy, c) - 1;
                if (i >= 0) mini(best, nd.pref[size_t(i)], c);
                break;
            }
            case Rel::lt: {
                const int i = y_bound<false>(nd.ys, qy, c) - 1;
                if (i >= 0) mini(best, nd.pref[size_t(i)], c);
                break;
            }
            case Rel::ge: {
                const int i = y_bound<false>(nd.ys, qy, c);
                if (i < int(nd.ys.size())) mini(best, nd.suff[size_t(i)], c);
                break;
            }
            case Rel::gt: {
                const int i = y_bound<true>(nd.ys, qy, c);
                if (i < int(nd.ys.size())) mini(best, nd.suff[size_t(i)], c);
                break;
            }
        }
        return;
    }
    const int mid = (nlo + nhi) / 2;
    visit(2 * v, nlo, mid, lo, hi, qy, yrel, best, c);
    visit(2 * v + 1, mid, nhi, lo, hi, qy, yrel, best, c);
}

std::pair<double, int> DominanceMinIndex::min_over(double qx, Rel xrel, double qy, Rel yrel,
                                                   Counters& c) const {
    const int n = int(xs_.size());
    ++c.binary_searches;
    int blo = 0, bhi = n;
    while (blo < bhi) {
        const int mid = (blo + bhi) / 2;
        ++c.comparisons;
        const bool go_right = (xrel == Rel::ge || xrel == Rel::lt) ? xs_[size_t(mid)] < qx
                                                                   : xs_[size_t(mid)] <= qx;
        if (go_right)
            blo = mid + 1;
        else
            bhi = mid;
    }
    int lo = 0, hi = n;
    if (xrel == Rel::ge || xrel == Rel::gt)
        lo = blo;
    else
        hi = blo;
    std::pair<double, int> best = kNone;
    if (lo < hi) visit(1, 0, leaves_, lo, hi, qy, yrel, best, c);
    return best;
}

}  // namespace uqr
