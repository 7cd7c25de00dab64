#include "uqr/zmax_tree.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <memory>

#include "uqr/error.hpp"
#include "uqr/halfplane.hpp"

namespace uqr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

ZMaxTree::ZMaxTree(std::vector<Pt> pts) {
    if (pts.empty()) fail(Errc::empty_input, "z-max tree over zero points");
    std::sort(pts.begin(), pts.end(), [](const Pt& p, const Pt& q) {
        if (p.lo != q.lo) return p.lo < q.lo;
        return p.id < q.id;
    });
    const int n = int(pts.size());
    leaves_ = 1;
    while (leaves_ < n) leaves_ <<= 1;
    los_.reserve(size_t(n));
    for (const Pt& p : pts) los_.push_back(p.lo);

    const auto hi_desc = [](const Pt& p, const Pt& q) {
        if (p.hi != q.hi) return p.hi > q.hi;
        return p.id < q.id;
    };
    std::vector<std::vector<Pt>> pn(size_t(2 * leaves_));
    for (int i = 0; i < n; ++i) pn[size_t(leaves_ + i)].push_back(pts[size_t(i)]);
    for (int v = leaves_ - 1; v >= 1; --v) {
        const auto& a = pn[size_t(2 * v)];
        const auto& b = pn[size_t(2 * v + 1)];
        pn[size_t(v)].resize(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), pn[size_t(v)].begin(), hi_desc);
    }

    nodes_.resize(size_t(2 * leaves_));
    for (int v = 1; v < 2 * leaves_; ++v) {
        const auto& src = pn[size_t(v)];
        const int m = int(src.size());
        if (m == 0) continue;
        Node& nd = nodes_[size_t(v)];
        nd.his.reserve(size_t(m));
        nd.zs.reserve(size_t(m));
        nd.ids.reserve(size_t(m));
        for (const Pt& p : src) {
            nd.his.push_back(p.hi);
            nd.zs.push_back(p.z);
            nd.ids.push_back(p.id);
        }
        const auto better = [&nd](int i, int j) {
            if (nd.zs[size_t(i)] != nd.zs[size_t(j)]) return nd.zs[size_t(i)] > nd.zs[size_t(j)];
            return nd.ids[size_t(i)] < nd.ids[size_t(j)];
        };
        nd.table.emplace_back(size_t(m));
        for (int i = 0; i < m; ++i) nd.table[0][size_t(i)] = i;
        for (int j = 1; (1 << j) <= m; ++j) {
            const int w = 1 << j;
            const auto& prev = nd.table[size_t(j - 1)];
            std::vector<int> row(size_t(m - w + 1));
            for (int i = 0; i + w <= m; ++i) {
                const int l = prev[size_t(i)];
                const int r = prev[size_t(i + w / 2)];
                row[size_t(i)] = better(l, r) ? l : r;
            }
            nd.table.push_back(std::move(row));
        }
    }
}

bool ZMaxTree::range_worse(const Range& a, const Range& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.id > b.id;
}

// prefix length of points with hi strictly above qhi
int ZMaxTree::region_len(const Node& nd, double qhi, Counters& c) const {
    ++c.binary_searches;
    int lo = 0, hi = int(nd.his.size());
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        ++c.comparisons;
        if (nd.his[size_t(mid)] > qhi)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

bool ZMaxTree::make_range(int node, int lo, int hi, Range& out, Counters& c) const {
    if (lo >= hi) return false;
    const Node& nd = nodes_[size_t(node)];
    const int j = std::bit_width(unsigned(hi - lo)) - 1;
    int pos = nd.table[size_t(j)][size_t(lo)];
    ++c.element_accesses;
    if ((1 << j) < hi - lo) {
        const int alt = nd.table[size_t(j)][size_t(hi - (1 << j))];
        ++c.element_accesses;
        ++c.comparisons;
        if (nd.zs[size_t(alt)] > nd.zs[size_t(pos)] ||
            (nd.zs[size_t(alt)] == nd.zs[size_t(pos)] && nd.ids[size_t(alt)] < nd.ids[size_t(pos)]))
            pos = alt;
    }
    out = Range{nd.zs[size_t(pos)], nd.ids[size_t(pos)], node, lo, hi, pos};
    return true;
}

void ZMaxTree::cover(int v, int nlo, int nhi, int lo, int hi, std::vector<int>& out) const {
    if (hi <= nlo || nhi <= lo || nodes_[size_t(v)].his.empty()) return;
    if (lo <= nlo && nhi <= hi) {
        out.push_back(v);
        return;
    }
    const int mid = (nlo + nhi) / 2;
    cover(2 * v, nlo, mid, lo, hi, out);
    cover(2 * v + 1, mid, nhi, lo, hi, out);
}

std::vector<ZMaxTree::Range> ZMaxTree::seeds(double qlo, double qhi, Counters& c) const {
    ++c.binary_searches;
    int blo = 0, bhi = int(los_.size());
    while (blo < bhi) {
        const int mid = (blo + bhi) / 2;
        ++c.comparisons;
        if (los_[size_t(mid)] < qlo)
            blo = mid + 1;
        else
            bhi = mid;
    }
    std::vector<Range> out;
    if (blo == 0) return out;
    std::vector<int> nds;
    cover(1, 0, leaves_, 0, blo, nds);
    for (int v : nds) {
        const int r = region_len(nodes_[size_t(v)], qhi, c);
        Range rg;
        if (make_range(v, 0, r, rg, c)) out.push_back(rg);
    }
    return out;
}

bool ZMaxTree::iter_pop(std::vector<Range>& heap, std::pair<double, int>& out, Counters& c) const {
    if (heap.empty()) return false;
    std::pop_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
    const Range r = heap.back();
    heap.pop_back();
    ++c.heap_ops;
    ++c.extract_max;
    Range h;
    if (make_range(r.node, r.lo, r.pos, h, c)) {
        heap.push_back(h);
        std::push_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
        ++c.heap_ops;
    }
    if (make_range(r.node, r.pos + 1, r.hi, h, c)) {
        heap.push_back(h);
        std::push_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
        ++c.heap_ops;
    }
    out = {r.z, r.id};
    return true;
}

std::pair<double, int> ZMaxTree::top1(double qlo, double qhi, Counters& c) const {
    std::pair<double, int> best{kNegInf, -1};
    for (const Range& r : seeds(qlo, qhi, c)) {
        ++c.comparisons;
        if (best.second < 0 || r.z > best.first || (r.z == best.first && r.id < best.second))
            best = {r.z, r.id};
    }
    return best;
}

std::vector<std::pair<double, int>> ZMaxTree::topk(double qlo, double qhi, int k,
                                                   Counters& c) const {
    if (k < 1) fail(Errc::k_out_of_range, "top-k needs k >= 1");
    std::vector<Range> heap = seeds(qlo, qhi, c);
    std::make_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
    c.heap_ops += long(heap.size());
    std::vector<std::pair<double, int>> out;
    std::pair<double, int> e;
    while (int(out.size()) < k && iter_pop(heap, e, c)) out.push_back(e);
    return out;
}

// Per-node lazy stream for the block engine; already descending in z.
class ZMaxNodeStream : public SeqStream {
  public:
    ZMaxNodeStream(const ZMaxTree* t, ZMaxTree::Range seed) : t_(t) { heap_.push_back(seed); }
    bool next(StreamItem& out, Counters& c) override {
        std::pair<double, int> e;
        if (!t_->iter_pop(heap_, e, c)) return false;
        out = StreamItem{e.first, e.second, 0, 1};
        return true;
    }

  private:
    const ZMaxTree* t_;
    std::vector<ZMaxTree::Range> heap_;
};

std::vector<std::pair<double, int>> ZMaxTree::topk_block(double qlo, double qhi, int k, int h,
                                                         Counters& c) const {
    if (k < 1) fail(Errc::k_out_of_range, "top-k needs k >= 1");
    std::vector<Range> sd = seeds(qlo, qhi, c);
    std::vector<std::unique_ptr<ZMaxNodeStream>> owned;
    std::vector<SeqStream*> ptrs;
    owned.reserve(sd.size());
    for (const Range& r : sd) {
        owned.push_back(std::make_unique<ZMaxNodeStream>(this, r));
        ptrs.push_back(owned.back().get());
    }
    const std::vector<StreamItem> sup = block_heap_collect(ptrs, k, h, c);

    // bar at or below the true k-th z, so the drain misses nothing
    double tau = kNegInf;
    if (int(sup.size()) >= k) {
        std::vector<double> zs;
        zs.reserve(sup.size());
        for (const StreamItem& it : sup) zs.push_back(it.h);
        std::nth_element(zs.begin(), zs.begin() + (k - 1), zs.end(), std::greater<double>());
        tau = zs[size_t(k) - 1];
    }

    std::vector<Range> heap = seeds(qlo, qhi, c);
    std::make_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
    c.heap_ops += long(heap.size());
    std::vector<std::pair<double, int>> out;
    while (!heap.empty()) {
        ++c.comparisons;
        if (!(heap.front().z >= tau)) break;
        std::pair<double, int> e;
        iter_pop(heap, e, c);
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const std::pair<double, int>& p,
                                         const std::pair<double, int>& q) {
        if (p.first != q.first) return p.first > q.first;
        return p.second < q.second;
    });
    if (int(out.size()) > k) out.resize(size_t(k));
    return out;
}

void ZMaxTree::report_geq(double qlo, double qhi, double zmin, std::vector<int>& out,
                          Counters& c) const {
    std::vector<Range> heap = seeds(qlo, qhi, c);
    std::make_heap(heap.begin(), heap.end(), &ZMaxTree::range_worse);
    c.heap_ops += long(heap.size());
    while (!heap.empty()) {
        ++c.comparisons;
        if (!(heap.front().z >= zmin)) break;
        std::pair<double, int> e;
        iter_pop(heap, e, c);
        out.push_back(e.second);
    }
}

}  // namespace uqr
