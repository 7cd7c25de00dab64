#include "uqr/histogram_unbounded.hpp"

#include <algorithm>

#include "uqr/error.hpp"
#include "uqr/oracle.hpp"

namespace uqr {

HistogramUnboundedIndex::HistogramUnboundedIndex(std::vector<UncertainPoint> pts)
    : pts_(std::move(pts)) {
    if (pts_.empty()) fail(Errc::empty_input, "index over zero points");
    double gmin = kInf, gmax = -kInf;
    for (size_t i = 0; i < pts_.size(); ++i) {
        const UncertainPoint& p = pts_[i];
        if (p.is_uniform()) fail(Errc::invalid_pdf, "histogram index fed a uniform point");
        gmin = std::min(gmin, p.cdf.breaks().front());
        gmax = std::max(gmax, p.cdf.breaks().back());
        id_index_.push_back({p.id, i});
        min_id_ = (min_id_ < 0) ? p.id : std::min(min_id_, p.id);
    }
    std::sort(id_index_.begin(), id_index_.end());
    for (size_t i = 1; i < id_index_.size(); ++i)
        check(id_index_[i - 1].first != id_index_[i].first, "duplicate point id");
    const double g0 = gmin - 1.0, g1 = gmax + 1.0;

    std::vector<HalfplaneTree::SpanLine> lsp, rsp;
    std::vector<std::vector<Segment>> lcur, rcur;
    for (const UncertainPoint& p : pts_) {
        const std::vector<double>& br = p.cdf.breaks();
        const std::vector<CdfPiece>& pc = p.cdf.pieces();
        std::vector<Segment> lc, rc;
        for (size_t i = 0; i < pc.size(); ++i) {
            const double x0 = i == 0 ? g0 : br[i - 1];
            const double x1 = i == br.size() ? g1 : br[i];
            const Line ln{pc[i].a, pc[i].b, p.id, int(i)};
            const Line fl{-pc[i].a, 1.0 - pc[i].b, p.id, int(i)};
            lsp.push_back({x0, x1, ln});
            rsp.push_back({x0, x1, fl});
            lc.push_back({x0, x1, ln.a, ln.b, p.id, int(i)});
            rc.push_back({x0, x1, fl.a, fl.b, p.id, int(i)});
        }
        lcur.push_back(std::move(lc));
        rcur.push_back(std::move(rc));
    }
    left_tree_ = HalfplaneTree(std::move(lsp));
    right_tree_ = HalfplaneTree(std::move(rsp));
    left_env_ = SegmentEnvelope::build(lcur);
    right_env_ = SegmentEnvelope::build(rcur);
}

const UncertainPoint& HistogramUnboundedIndex::by_id(int id) const {
    auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::pair<int, size_t>{id, 0});
    check(it != id_index_.end() && it->first == id, "unknown point id");
    return pts_[it->second];
}

HistogramUnboundedIndex::Side HistogramUnboundedIndex::pick_side(const QueryInterval& I) const {
    if (I.bounded())
        fail(Errc::bounded_interval, "this index handles intervals with an infinite side");
    if (I.hi_bounded()) return {&left_tree_, &left_env_, I.hi};
    return {&right_tree_, &right_env_, I.lo};
}

QueryResult HistogramUnboundedIndex::all_certain(int cap) const {
    QueryResult r;
    for (const auto& [id, idx] : id_index_) {
        if (cap >= 0 && int(r.items.size()) >= cap) break;
        r.items.push_back({id, 1.0});
    }
    r.counters.reported = r.items.size();
    return r;
}

QueryResult HistogramUnboundedIndex::top1(const QueryInterval& I) const {
    if (!I.lo_bounded() && !I.hi_bounded()) {
        QueryResult r;
        r.items.push_back({min_id_, 1.0});
        r.counters.reported = 1;
        return r;
    }
    const Side s = pick_side(I);
    QueryResult r;
    const Segment& top = s.env->locate(s.x, r.counters);
    r.items.push_back({top.owner, prob(top.owner, I)});
    r.counters.reported = 1;
    return r;
}

QueryResult HistogramUnboundedIndex::topk(const QueryInterval& I, int k, Engine engine) const {
    require_k(k, pts_.size());
    if (engine == Engine::auto_) engine = Engine::heap;
    if (engine != Engine::heap && engine != Engine::block)
        fail(Errc::capability_mismatch, "this index implements the heap and block engines");
    if (!I.lo_bounded() && !I.hi_bounded()) return all_certain(k);
    const Side s = pick_side(I);
    QueryResult r;
    const int h = default_block_size(pts_.size());
    const std::vector<Scored> scored = engine == Engine::heap
                                           ? s.tree->topk_heap(0.0, s.x, k, r.counters)
                                           : s.tree->topk_block(0.0, s.x, k, h, r.counters);
    r.items.reserve(scored.size());
    for (const Scored& sc : scored) r.items.push_back({sc.owner, prob(sc.owner, I)});
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

QueryResult HistogramUnboundedIndex::threshold(const QueryInterval& I, double tau) const {
    require_tau(tau);
    if (!I.lo_bounded() && !I.hi_bounded()) return all_certain(-1);
    if (tau == 0.0) {
        QueryResult r;
        for (const auto& [id, idx] : id_index_) r.items.push_back({id, prob(id, I)});
        std::sort(r.items.begin(), r.items.end(), item_before);
        r.counters.reported = r.items.size();
        return r;
    }
    const Side s = pick_side(I);
    QueryResult r;
    std::vector<int> ids;
    s.tree->report_above(0.0, s.x, tau - kTauSlack, ids, r.counters);
    r.items.reserve(ids.size());
    for (int id : ids) {
        const double pr = prob(id, I);
        if (pr >= tau) r.items.push_back({id, pr});
    }
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

}  // namespace uqr
