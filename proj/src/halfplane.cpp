#include "uqr/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace uqr {

LayeredHalfplaneIndex::LayeredHalfplaneIndex(std::vector<Line> lines) {
    if (lines.empty()) fail(Errc::empty_input, "halfplane index over zero lines");
    DedupResult d = dedup_lines(std::move(lines));
    owners_ = std::move(d.owners);
    for (const auto& o : owners_) expanded_ += int(o.size());
    layers_ = peel_layers(std::move(d.lines));
    cascade_ = CascadeBridges(layers_);
}

int LayeredHalfplaneIndex::rep_count() const { return int(owners_.size()); }

const Line& LayeredHalfplaneIndex::top_line(double x, Counters& c) const {
    CascadeBridges::Walk w = cascade_.walk_from_top(x, c);
    return layers_.front().lines[size_t(w.piece())];
}

double LayeredHalfplaneIndex::top_height(double x, Counters& c) const {
    return top_line(x, c).eval(x);
}

void LayeredHalfplaneIndex::report_above(double x, double y, std::vector<int>& out_owners,
                                         Counters& c) const {
    report_walk(cascade_.walk_from_top(x, c), x, y, out_owners, c);
}

void LayeredHalfplaneIndex::report_above_at(int pos0, double x, double y,
                                            std::vector<int>& out_owners, Counters& c) const {
    report_walk(cascade_.walk_at(pos0, x, c), x, y, out_owners, c);
}

void LayeredHalfplaneIndex::report_walk(CascadeBridges::Walk w, double x, double y,
                                        std::vector<int>& out_owners, Counters& c) const {
    auto emit = [&](const Line& l) {
        const std::vector<int>& os = owners_[size_t(l.slot)];
        out_owners.insert(out_owners.end(), os.begin(), os.end());
        c.reported += os.size();
    };
    for (;;) {
        const EnvelopeChain& ch = layers_[size_t(w.layer())];
        const int p = w.piece();
        ++c.comparisons;
        if (!(ch.lines[size_t(p)].eval(x) >= y)) break;  // deeper layers sit lower
        emit(ch.lines[size_t(p)]);
        // at fixed x the chain heights are unimodal around the top piece
        for (int j = p - 1; j >= 0; --j) {
            ++c.comparisons;
            if (!(ch.lines[size_t(j)].eval(x) >= y)) break;
            emit(ch.lines[size_t(j)]);
        }
        for (int j = p + 1; j < int(ch.size()); ++j) {
            ++c.comparisons;
            if (!(ch.lines[size_t(j)].eval(x) >= y)) break;
            emit(ch.lines[size_t(j)]);
        }
        if (w.last_layer()) break;
        w.descend(c);
    }
}

void CandidateSearch::push_cand(const LayeredHalfplaneIndex& idx, double x, int layer, int piece,
                                signed char kind, const CascadeBridges::Walk* walk) {
    const Line& l = idx.layers_[size_t(layer)].lines[size_t(piece)];
    Cand cd;
    cd.h = l.eval(x);
    cd.owner = l.owner;
    cd.idx = &idx;
    cd.layer = layer;
    cd.piece = piece;
    cd.x = x;
    cd.kind = kind;
    if (walk) cd.walk = *walk;
    heap_.push_back(cd);
    ++c_->heap_ops;
    Counters* c = c_;
    std::push_heap(heap_.begin(), heap_.end(), [c](const Cand& a, const Cand& b) {
        ++c->comparisons;
        if (a.h != b.h) return a.h < b.h;
        return a.owner > b.owner;
    });
}

void CandidateSearch::add_source(const LayeredHalfplaneIndex& idx, double x) {
    CascadeBridges::Walk w = idx.cascade_.walk_from_top(x, *c_);
    push_cand(idx, x, 0, w.piece(), 0, &w);
}

void CandidateSearch::add_source_at(const LayeredHalfplaneIndex& idx, int pos0, double x) {
    CascadeBridges::Walk w = idx.cascade_.walk_at(pos0, x, *c_);
    push_cand(idx, x, 0, w.piece(), 0, &w);
}

std::vector<Scored> CandidateSearch::run(int k) {
    std::vector<Scored> out;
    Counters* c = c_;
    auto less = [c](const Cand& a, const Cand& b) {
        ++c->comparisons;
        if (a.h != b.h) return a.h < b.h;
        return a.owner > b.owner;
    };
    int expanded = 0;
    bool have_tau = false;
    double tau_k = 0.0;
    while (!heap_.empty()) {
        if (expanded >= k) {
            // keep draining exact ties with the k-th height so the final
            // owner-ordered cut matches the other engines
            ++c_->comparisons;
            if (!have_tau || !(heap_.front().h >= tau_k)) break;
        }
        std::pop_heap(heap_.begin(), heap_.end(), less);
        Cand top = heap_.back();
        heap_.pop_back();
        ++c_->heap_ops;
        ++c_->extract_max;
        const LayeredHalfplaneIndex& idx = *top.idx;
        const EnvelopeChain& ch = idx.layers_[size_t(top.layer)];
        const Line& l = ch.lines[size_t(top.piece)];
        for (int id : idx.owners_[size_t(l.slot)]) {
            out.push_back({top.h, id});
            ++expanded;
        }
        if (!have_tau && expanded >= k) {
            std::vector<double> hs;
            hs.reserve(out.size());
            for (const Scored& s : out) hs.push_back(s.h);
            std::nth_element(hs.begin(), hs.begin() + (k - 1), hs.end(), std::greater<double>());
            tau_k = hs[size_t(k) - 1];
            have_tau = true;
        }
        if (top.kind == 0) {
            if (top.piece > 0) push_cand(idx, top.x, top.layer, top.piece - 1, -1, nullptr);
            if (top.piece + 1 < int(ch.size()))
                push_cand(idx, top.x, top.layer, top.piece + 1, +1, nullptr);
            if (!top.walk.last_layer()) {
                CascadeBridges::Walk w = top.walk;
                w.descend(*c_);
                push_cand(idx, top.x, top.layer + 1, w.piece(), 0, &w);
            }
        } else if (top.kind < 0) {
            if (top.piece > 0) push_cand(idx, top.x, top.layer, top.piece - 1, -1, nullptr);
        } else {
            if (top.piece + 1 < int(ch.size()))
                push_cand(idx, top.x, top.layer, top.piece + 1, +1, nullptr);
        }
    }
    std::sort(out.begin(), out.end(), scored_before);
    if (int(out.size()) > k) out.resize(size_t(k));
    return out;
}

std::vector<Scored> LayeredHalfplaneIndex::topk_heap(double x, int k, Counters& c) const {
    if (k < 1 || k > expanded_) fail(Errc::k_out_of_range, "k outside [1, n]");
    CandidateSearch cs(c);
    cs.add_source(*this, x);
    return cs.run(k);
}

namespace {

using detail::DescView;

double heap_merge_kth(const std::vector<DescView>& views, int k, Counters& c) {
    struct E {
        double h;
        int view;
        int pos;
    };
    auto less = [&c](const E& a, const E& b) {
        ++c.comparisons;
        return a.h < b.h;
    };
    std::vector<E> heap;
    heap.reserve(views.size());
    for (int v = 0; v < int(views.size()); ++v)
        if (views[size_t(v)].len > 0) {
            heap.push_back({views[size_t(v)].val(0, c), v, 0});
            ++c.heap_ops;
            std::push_heap(heap.begin(), heap.end(), less);
        }
    double h = 0.0;
    for (int t = 0; t < k; ++t) {
        check(!heap.empty(), "merge ran dry before the k-th element");
        std::pop_heap(heap.begin(), heap.end(), less);
        E e = heap.back();
        heap.pop_back();
        ++c.heap_ops;
        h = e.h;
        const DescView& v = views[size_t(e.view)];
        if (e.pos + 1 < v.len) {
            heap.push_back({v.val(e.pos + 1, c), e.view, e.pos + 1});
            ++c.heap_ops;
            std::push_heap(heap.begin(), heap.end(), less);
        }
    }
    return h;
}

}  // namespace

double detail::select_kth_desc(const std::vector<DescView>& views, int k, Counters& c) {
    int m = 0;
    long total = 0;
    long half_total = 0;
    for (const auto& v : views)
        if (v.len > 0) {
            ++m;
            total += v.len;
            half_total += v.len / 2;
        }
    check(k >= 1 && k <= total, "selection rank out of range");
    const int kh = (k + 1) / 2;
    if (k <= 4 * m || kh > half_total) return heap_merge_kth(views, k, c);

    std::vector<DescView> halved;
    halved.reserve(views.size());
    for (const auto& v : views)
        if (v.len / 2 > 0) halved.push_back({v.lines, v.start + v.step, v.step * 2, v.len / 2, v.x});
    const double xh = select_kth_desc(halved, kh, c);

    // Everything strictly above xh fits in k + 2m probes.
    std::vector<double> pool;
    pool.reserve(size_t(k) + 2 * size_t(m));
    for (const auto& v : views)
        for (int j = 0; j < v.len; ++j) {
            double h = v.val(j, c);
            if (!(h > xh)) break;
            pool.push_back(h);
        }
    if (int(pool.size()) >= k) {
        std::nth_element(pool.begin(), pool.begin() + (k - 1), pool.end(), std::greater<double>());
        return pool[size_t(k) - 1];
    }
    return xh;
}

std::vector<Scored> LayeredHalfplaneIndex::topk_select(double x, int k, Counters& c) const {
    if (k < 1 || k > expanded_) fail(Errc::k_out_of_range, "k outside [1, n]");
    const int L = std::min(k, layer_count());
    std::vector<DescView> views;
    views.reserve(size_t(L) * 2);
    CascadeBridges::Walk w = cascade_.walk_from_top(x, c);
    for (int i = 0;; ++i) {
        const EnvelopeChain& ch = layers_[size_t(i)];
        const int p = w.piece();
        const int right_len = std::min(int(ch.size()) - p, k);
        if (right_len > 0) views.push_back({&ch.lines, p, +1, right_len, x});
        const int left_len = std::min(p, k);
        if (left_len > 0) views.push_back({&ch.lines, p - 1, -1, left_len, x});
        if (i + 1 >= L) break;
        w.descend(c);
    }
    long total = 0;
    for (const auto& v : views) total += v.len;
    const double tau = detail::select_kth_desc(views, int(std::min<long>(k, total)), c);

    // Collection runs past the k-per-direction cap so exact ties with the
    // cut height all make the pool; the final sort settles them by owner.
    std::vector<Scored> out;
    for (const auto& v : views) {
        const int limit = v.step > 0 ? int(v.lines->size()) - v.start
                                     : v.start + 1;
        for (int j = 0; j < limit; ++j) {
            const Line& l = v.at(j, c);
            double h = l.eval(x);
            ++c.comparisons;
            if (!(h >= tau)) break;
            for (int id : owners_[size_t(l.slot)]) out.push_back({h, id});
        }
    }
    std::sort(out.begin(), out.end(), scored_before);
    check(int(out.size()) >= k, "selection pool smaller than k");
    if (int(out.size()) > k) out.resize(size_t(k));
    return out;
}

int default_block_size(size_t n) {
    double l = std::log2(std::max<double>(4.0, double(n)));
    return std::max(1, int(std::ceil(std::log2(l))));
}

std::vector<StreamItem> block_heap_collect(const std::vector<SeqStream*>& streams, int k, int h,
                                           Counters& c) {
    check(h >= 1, "block size must be positive");
    struct Block {
        std::vector<StreamItem> items;
        int stream;
    };
    auto less = [&c](const Block& a, const Block& b) {
        ++c.comparisons;
        return a.items.back().h < b.items.back().h;  // key: block minimum
    };
    auto read_block = [&](int s) {
        Block b;
        b.stream = s;
        b.items.reserve(size_t(h));
        for (int t = 0; t < h; ++t) {
            StreamItem it;
            if (!streams[size_t(s)]->next(it, c)) break;
            ++c.element_accesses;
            b.items.push_back(it);
        }
        return b;
    };
    std::vector<Block> heap;
    std::vector<StreamItem> S;
    for (int s = 0; s < int(streams.size()); ++s) {
        Block b = read_block(s);
        if (!b.items.empty()) {
            heap.push_back(std::move(b));
            ++c.heap_ops;
            std::push_heap(heap.begin(), heap.end(), less);
        }
    }
    long weight = 0;
    while (weight < k && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), less);
        Block b = std::move(heap.back());
        heap.pop_back();
        ++c.heap_ops;
        ++c.extract_max;
        for (StreamItem& it : b.items) {
            weight += it.weight;
            S.push_back(it);
        }
        if (weight >= k) break;
        Block nb = read_block(b.stream);
        if (!nb.items.empty()) {
            heap.push_back(std::move(nb));
            ++c.heap_ops;
            std::push_heap(heap.begin(), heap.end(), less);
        }
    }
    for (const Block& b : heap) S.insert(S.end(), b.items.begin(), b.items.end());
    return S;
}

}  // namespace uqr
