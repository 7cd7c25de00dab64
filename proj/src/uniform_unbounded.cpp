#include "uqr/uniform_unbounded.hpp"

#include <algorithm>

#include "uqr/oracle.hpp"

namespace uqr {

UniformUnboundedIndex::UniformUnboundedIndex(std::vector<UncertainPoint> pts)
    : pts_(std::move(pts)) {
    if (pts_.empty()) fail(Errc::empty_input, "index over zero points");
    std::vector<Line> left, right;
    std::vector<std::pair<double, int>> his, los;
    left.reserve(pts_.size());
    right.reserve(pts_.size());
    for (size_t i = 0; i < pts_.size(); ++i) {
        const UncertainPoint& p = pts_[i];
        if (!p.is_uniform()) fail(Errc::not_uniform, "uniform index fed a histogram point");
        const CdfPiece mid = p.cdf.pieces()[1];
        left.push_back({mid.a, mid.b, p.id, 1});
        right.push_back({-mid.a, 1.0 - mid.b, p.id, 1});
        his.push_back({p.support_hi, p.id});
        los.push_back({p.support_lo, p.id});
        id_index_.push_back({p.id, i});
        min_id_ = (min_id_ < 0) ? p.id : std::min(min_id_, p.id);
    }
    std::sort(id_index_.begin(), id_index_.end());
    for (size_t i = 1; i < id_index_.size(); ++i)
        check(id_index_[i - 1].first != id_index_[i].first, "duplicate point id");
    left_ = LayeredHalfplaneIndex(std::move(left));
    right_ = LayeredHalfplaneIndex(std::move(right));
    hi_minid_ = MinIdByKey(std::move(his));
    lo_minid_ = MinIdByKey(std::move(los));
}

const UncertainPoint& UniformUnboundedIndex::by_id(int id) const {
    auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::pair<int, size_t>{id, 0});
    check(it != id_index_.end() && it->first == id, "unknown point id");
    return pts_[it->second];
}

UniformUnboundedIndex::Side UniformUnboundedIndex::pick_side(const QueryInterval& I) const {
    if (I.bounded())
        fail(Errc::bounded_interval, "this index handles intervals with an infinite side");
    if (I.hi_bounded()) return {&left_, I.hi, hi_minid_.min_id_key_leq(I.hi)};
    return {&right_, I.lo, lo_minid_.min_id_key_geq(I.lo)};
}

QueryResult UniformUnboundedIndex::all_certain(int cap) const {
    QueryResult r;
    std::vector<int> ids;
    ids.reserve(pts_.size());
    for (const auto& [id, idx] : id_index_) ids.push_back(id);
    if (cap >= 0 && int(ids.size()) > cap) ids.resize(size_t(cap));
    for (int id : ids) r.items.push_back({id, 1.0});
    r.counters.reported = r.items.size();
    return r;
}

QueryResult UniformUnboundedIndex::top1(const QueryInterval& I) const {
    if (!I.lo_bounded() && !I.hi_bounded()) {
        QueryResult r;
        r.items.push_back({min_id_, 1.0});
        r.counters.reported = 1;
        return r;
    }
    Side s = pick_side(I);
    QueryResult r;
    const Line& top = s.idx->top_line(s.x, r.counters);
    const double h = top.eval(s.x);
    if (h >= 1.0 && s.prob1_id != -1) {
        r.items.push_back({s.prob1_id, 1.0});
    } else if (h <= 0.0) {
        r.items.push_back({min_id_, 0.0});
    } else {
        r.items.push_back({top.owner, prob(top.owner, I)});
    }
    r.counters.reported = 1;
    return r;
}

QueryResult UniformUnboundedIndex::topk(const QueryInterval& I, int k, Engine engine) const {
    require_k(k, pts_.size());
    if (engine == Engine::auto_) engine = Engine::heap;
    if (engine != Engine::heap && engine != Engine::select)
        fail(Errc::capability_mismatch, "this index implements the heap and select engines");
    if (!I.lo_bounded() && !I.hi_bounded()) return all_certain(k);
    Side s = pick_side(I);
    QueryResult r;
    std::vector<Scored> scored = (engine == Engine::heap) ? s.idx->topk_heap(s.x, k, r.counters)
                                                          : s.idx->topk_select(s.x, k, r.counters);
    r.items.reserve(scored.size());
    for (const Scored& sc : scored) r.items.push_back({sc.owner, prob(sc.owner, I)});
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

QueryResult UniformUnboundedIndex::threshold(const QueryInterval& I, double tau) const {
    require_tau(tau);
    if (!I.lo_bounded() && !I.hi_bounded()) return all_certain(-1);
    if (tau == 0.0) {
        // everything qualifies: probabilities are clamped at zero
        QueryResult r;
        for (const auto& [id, idx] : id_index_) r.items.push_back({id, prob(id, I)});
        std::sort(r.items.begin(), r.items.end(), item_before);
        r.counters.reported = r.items.size();
        return r;
    }
    Side s = pick_side(I);
    QueryResult r;
    std::vector<int> ids;
    s.idx->report_above(s.x, tau - kTauSlack, ids, r.counters);
    r.items.reserve(ids.size());
    for (int id : ids) {
        double pr = prob(id, I);
        if (pr >= tau) r.items.push_back({id, pr});
    }
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

}  // namespace uqr
