#include "uqr/halfplane_tree.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "uqr/error.hpp"

namespace uqr {

namespace {

int ceil_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

int log2_exact(int pow2) {
    int l = 0;
    while ((1 << l) < pow2) ++l;
    return l;
}

// Descending stream of one node's layer-top heights at fixed x; weight is
// the top representative's alias multiplicity.
class LayerTopStream : public SeqStream {
  public:
    LayerTopStream(const LayeredHalfplaneIndex& idx, int pos0, double x, Counters& c)
        : idx_(&idx), x_(x), walk_(idx.cascade().walk_at(pos0, x, c)) {}

    bool next(StreamItem& out, Counters& c) override {
        if (done_) return false;
        const EnvelopeChain& ch = idx_->layers()[size_t(walk_.layer())];
        const Line& l = ch.lines[size_t(walk_.piece())];
        out.h = l.eval(x_);
        out.owner = l.owner;
        out.aux = 0;
        out.weight = int(idx_->owners_of(l).size());
        if (walk_.last_layer())
            done_ = true;
        else
            walk_.descend(c);
        return true;
    }

  private:
    const LayeredHalfplaneIndex* idx_;
    double x_;
    CascadeBridges::Walk walk_;
    bool done_ = false;
};

}  // namespace

HalfplaneTree::HalfplaneTree(Mode mode, std::vector<KeyedLine> entries) {
    check(mode != Mode::interval, "interval trees take spans");
    if (entries.empty()) fail(Errc::empty_input, "tree over zero lines");
    mode_ = mode;
    std::sort(entries.begin(), entries.end(), [](const KeyedLine& p, const KeyedLine& q) {
        if (p.key != q.key) return p.key < q.key;
        if (p.line.owner != q.line.owner) return p.line.owner < q.line.owner;
        return p.line.piece < q.line.piece;
    });
    const int n = int(entries.size());
    leaves_ = ceil_pow2(n);
    keys_.reserve(size_t(n));
    for (const KeyedLine& e : entries) keys_.push_back(e.key);

    std::vector<std::vector<Line>> node_lines(size_t(2 * leaves_));
    for (int j = 0; j < n; ++j) node_lines[size_t(leaves_ + j)].push_back(entries[size_t(j)].line);
    for (int v = leaves_ - 1; v >= 1; --v) {
        auto& dst = node_lines[size_t(v)];
        for (int ch : {2 * v, 2 * v + 1})
            dst.insert(dst.end(), node_lines[size_t(ch)].begin(), node_lines[size_t(ch)].end());
    }
    long internal = 0;
    for (int v = 1; v < leaves_; ++v) internal += long(node_lines[size_t(v)].size());
    check(internal == long(n) * log2_exact(leaves_), "internal line mass off the exact budget");
    finish_build(std::move(node_lines));
}

HalfplaneTree::HalfplaneTree(std::vector<SpanLine> spans) {
    if (spans.empty()) fail(Errc::empty_input, "tree over zero spans");
    mode_ = Mode::interval;
    slab_.reserve(spans.size() * 2);
    for (const SpanLine& s : spans) {
        check(s.x0 < s.x1, "span needs positive width");
        slab_.push_back(s.x0);
        slab_.push_back(s.x1);
    }
    std::sort(slab_.begin(), slab_.end());
    slab_.erase(std::unique(slab_.begin(), slab_.end()), slab_.end());
    const int S = int(slab_.size()) - 1;
    leaves_ = ceil_pow2(S);

    std::vector<std::vector<Line>> node_lines(size_t(2 * leaves_));
    // canonical segment-tree assignment of [lo, hi) leaf ranges
    struct Frame {
        int v, nlo, nhi;
    };
    for (const SpanLine& s : spans) {
        const int lo = int(std::lower_bound(slab_.begin(), slab_.end(), s.x0) - slab_.begin());
        const int hi = int(std::lower_bound(slab_.begin(), slab_.end(), s.x1) - slab_.begin());
        std::vector<Frame> stack{{1, 0, leaves_}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            if (hi <= f.nlo || f.nhi <= lo) continue;
            if (lo <= f.nlo && f.nhi <= hi) {
                node_lines[size_t(f.v)].push_back(s.line);
                continue;
            }
            const int mid = (f.nlo + f.nhi) / 2;
            stack.push_back({2 * f.v, f.nlo, mid});
            stack.push_back({2 * f.v + 1, mid, f.nhi});
        }
    }
    finish_build(std::move(node_lines));
}

void HalfplaneTree::finish_build(std::vector<std::vector<Line>> node_lines) {
    nodes_.resize(node_lines.size());
    for (size_t v = 1; v < node_lines.size(); ++v)
        if (!node_lines[v].empty())
            nodes_[v].idx = LayeredHalfplaneIndex(std::move(node_lines[v]));
    for (int v = int(nodes_.size()) - 1; v >= 1; --v) build_tcat(v);
}

void HalfplaneTree::build_tcat(int v) {
    const bool has_own = !nodes_[size_t(v)].idx.empty();
    const std::vector<CascadeBridges::Entry>* own =
        has_own ? &nodes_[size_t(v)].idx.cascade().top_catalog() : nullptr;
    const int l = 2 * v, r = 2 * v + 1;
    const std::vector<TreeEntry>* lt =
        (l < int(nodes_.size()) && !nodes_[size_t(l)].tcat.empty()) ? &nodes_[size_t(l)].tcat
                                                                    : nullptr;
    const std::vector<TreeEntry>* rt =
        (r < int(nodes_.size()) && !nodes_[size_t(r)].tcat.empty()) ? &nodes_[size_t(r)].tcat
                                                                    : nullptr;
    std::vector<double> xs;
    if (own)
        for (size_t i = 0; i < own->size(); i += 2) xs.push_back((*own)[i].x);
    if (lt)
        for (size_t i = 0; i < lt->size(); i += 2) xs.push_back((*lt)[i].x);
    if (rt)
        for (size_t i = 0; i < rt->size(); i += 2) xs.push_back((*rt)[i].x);
    if (xs.empty()) return;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<TreeEntry>& out = nodes_[size_t(v)].tcat;
    out.reserve(xs.size());
    int po = -1, pl = -1, pr = -1;
    for (double x : xs) {
        if (own)
            while (po + 1 < int(own->size()) && (*own)[size_t(po) + 1].x <= x) ++po;
        if (lt)
            while (pl + 1 < int(lt->size()) && (*lt)[size_t(pl) + 1].x <= x) ++pl;
        if (rt)
            while (pr + 1 < int(rt->size()) && (*rt)[size_t(pr) + 1].x <= x) ++pr;
        out.push_back({x, own ? po : -1, lt ? pl : -1, rt ? pr : -1});
    }
}

int HalfplaneTree::own_pos(int v, int t, double x, Counters& c) const {
    const auto& cat = nodes_[size_t(v)].idx.cascade().top_catalog();
    int p = nodes_[size_t(v)].tcat[size_t(t)].own0;
    int adv = 0;
    while (p + 1 < int(cat.size())) {
        ++c.comparisons;
        if (!(cat[size_t(p) + 1].x <= x)) break;
        ++p;
        ++adv;
        ++c.bridge_steps;
    }
    check(adv <= 1, "own-catalog bridge drifted past one step");
    return p;
}

int HalfplaneTree::child_pos(int v, int t, bool left_child, double x, Counters& c) const {
    const TreeEntry& e = nodes_[size_t(v)].tcat[size_t(t)];
    int p = left_child ? e.bl : e.br;
    if (p < 0) return -1;
    const std::vector<TreeEntry>& cat = nodes_[size_t(left_child ? 2 * v : 2 * v + 1)].tcat;
    int adv = 0;
    while (p + 1 < int(cat.size())) {
        ++c.comparisons;
        if (!(cat[size_t(p) + 1].x <= x)) break;
        ++p;
        ++adv;
        ++c.bridge_steps;
    }
    check(adv <= 1, "child-catalog bridge drifted past one step");
    return p;
}

void HalfplaneTree::add_cover(int v, int t, double x, Cover& cov, Counters& c) const {
    const LayeredHalfplaneIndex& idx = nodes_[size_t(v)].idx;
    if (idx.empty()) return;
    cov.nodes.emplace_back(&idx, own_pos(v, t, x, c));
    cov.expanded += idx.expanded_count();
}

HalfplaneTree::Cover HalfplaneTree::locate(double q, double x, Counters& c) const {
    Cover cov;
    if (nodes_.empty() || nodes_[1].tcat.empty()) return cov;
    ++c.binary_searches;
    int t = detail::last_leq(nodes_[1].tcat, x, [](const TreeEntry& e) { return e.x; }, c);
    check(t >= 0, "tree catalog lost its low sentinel");
    int v = 1;
    if (mode_ == Mode::interval) {
        ++c.binary_searches;
        int j = detail::last_leq(slab_, x, [](double s) { return s; }, c);
        if (j < 0) j = 0;
        if (j > int(slab_.size()) - 2) j = int(slab_.size()) - 2;
        int nlo = 0, nhi = leaves_;
        for (;;) {
            add_cover(v, t, x, cov, c);
            if (v >= leaves_) break;
            const int mid = (nlo + nhi) / 2;
            const bool left = j < mid;
            const int ct = child_pos(v, t, left, x, c);
            if (ct < 0) break;  // nothing stored below here on this path
            v = left ? 2 * v : 2 * v + 1;
            (left ? nhi : nlo) = mid;
            t = ct;
        }
        return cov;
    }

    // boundary leaf for the key cut
    const int n = int(keys_.size());
    ++c.binary_searches;
    int blo = 0, bhi = n;
    while (blo < bhi) {
        const int mid = (blo + bhi) / 2;
        ++c.comparisons;
        const bool go_right =
            mode_ == Mode::point_suffix ? keys_[size_t(mid)] < q : keys_[size_t(mid)] <= q;
        if (go_right)
            blo = mid + 1;
        else
            bhi = mid;
    }
    const int f = mode_ == Mode::point_suffix ? blo : blo - 1;
    if (f < 0 || f >= n) return cov;

    int nlo = 0, nhi = leaves_;
    while (v < leaves_) {
        const int mid = (nlo + nhi) / 2;
        const bool goleft = f < mid;
        if (mode_ == Mode::point_suffix && goleft) {
            const int rp = child_pos(v, t, false, x, c);
            if (rp >= 0) add_cover(2 * v + 1, rp, x, cov, c);
        } else if (mode_ == Mode::point_prefix && !goleft) {
            const int lp = child_pos(v, t, true, x, c);
            if (lp >= 0) add_cover(2 * v, lp, x, cov, c);
        }
        const int ct = child_pos(v, t, goleft, x, c);
        check(ct >= 0, "descent lost the boundary leaf");
        v = goleft ? 2 * v : 2 * v + 1;
        (goleft ? nhi : nlo) = mid;
        t = ct;
    }
    add_cover(v, t, x, cov, c);
    return cov;
}

void HalfplaneTree::report_above(double q, double x, double y, std::vector<int>& out_owners,
                                 Counters& c) const {
    Cover cov = locate(q, x, c);
    for (const auto& [idx, p0] : cov.nodes) idx->report_above_at(p0, x, y, out_owners, c);
}

std::vector<Scored> HalfplaneTree::topk_heap(double q, double x, int k, Counters& c) const {
    if (k < 1) fail(Errc::k_out_of_range, "k must be positive");
    Cover cov = locate(q, x, c);
    if (cov.expanded == 0) return {};
    CandidateSearch cs(c);
    for (const auto& [idx, p0] : cov.nodes) cs.add_source_at(*idx, p0, x);
    return cs.run(std::min(k, cov.expanded));
}

std::vector<Scored> HalfplaneTree::topk_block(double q, double x, int k, int block,
                                              Counters& c) const {
    if (k < 1) fail(Errc::k_out_of_range, "k must be positive");
    if (block < 1) block = 1;
    Cover cov = locate(q, x, c);
    if (cov.expanded == 0) return {};
    if (k > cov.expanded) k = cov.expanded;

    // stage one: a block-heap superset of the k highest layer tops pins the
    // per-node layer depth that can still matter
    std::vector<LayerTopStream> streams;
    streams.reserve(cov.nodes.size());
    for (const auto& [idx, p0] : cov.nodes) streams.emplace_back(*idx, p0, x, c);
    std::vector<SeqStream*> ptrs;
    ptrs.reserve(streams.size());
    for (LayerTopStream& s : streams) ptrs.push_back(&s);
    std::vector<StreamItem> sup = block_heap_collect(ptrs, k, block, c);
    std::sort(sup.begin(), sup.end(), [&c](const StreamItem& p, const StreamItem& q2) {
        ++c.comparisons;
        return p.h > q2.h;
    });
    double tau_b = -std::numeric_limits<double>::infinity();
    long wsum = 0;
    for (const StreamItem& it : sup) {
        wsum += it.weight;
        if (wsum >= k) {
            tau_b = it.h;
            break;
        }
    }

    // stage two: rank selection across every layer still above the bar
    struct Scan {
        const EnvelopeChain* ch;
        const LayeredHalfplaneIndex* idx;
        int start;
        int step;
    };
    std::vector<Scan> scans;
    std::vector<detail::DescView> views;
    for (const auto& [idx, p0] : cov.nodes) {
        CascadeBridges::Walk w = idx->cascade().walk_at(p0, x, c);
        for (;;) {
            const EnvelopeChain& ch = idx->layers()[size_t(w.layer())];
            const int p = w.piece();
            ++c.comparisons;
            if (!(ch.lines[size_t(p)].eval(x) >= tau_b)) break;
            const int right_len = std::min(int(ch.size()) - p, k);
            if (right_len > 0) {
                views.push_back({&ch.lines, p, +1, right_len, x});
                scans.push_back({&ch, idx, p, +1});
            }
            const int left_len = std::min(p, k);
            if (left_len > 0) {
                views.push_back({&ch.lines, p - 1, -1, left_len, x});
                scans.push_back({&ch, idx, p - 1, -1});
            }
            if (w.last_layer()) break;
            w.descend(c);
        }
    }
    long total = 0;
    for (const auto& vw : views) total += vw.len;
    check(total >= 1, "no layer cleared the stage-one bar");
    const double tau = detail::select_kth_desc(views, int(std::min<long>(k, total)), c);

    std::vector<Scored> out;
    for (const Scan& s : scans) {
        const std::vector<Line>& lines = s.ch->lines;
        for (int j = s.start; j >= 0 && j < int(lines.size()); j += s.step) {
            ++c.element_accesses;
            const double h = lines[size_t(j)].eval(x);
            ++c.comparisons;
            if (!(h >= tau)) break;
            for (int id : s.idx->owners_of(lines[size_t(j)])) out.push_back({h, id});
        }
    }
    std::sort(out.begin(), out.end(), scored_before);
    check(int(out.size()) >= k, "stage-two pool smaller than k");
    out.resize(size_t(k));
    return out;
}

}  // namespace uqr
