#include "uqr/uniform_bounded.hpp"

#include <algorithm>

#include "uqr/error.hpp"
#include "uqr/oracle.hpp"

namespace uqr {

namespace {

// counted boundary search over an ascending key array
int key_bound(const std::vector<double>& keys, double q, bool strict_less, Counters& c) {
    ++c.binary_searches;
    int lo = 0, hi = int(keys.size());
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        ++c.comparisons;
        const bool go_right = strict_less ? keys[size_t(mid)] < q : keys[size_t(mid)] <= q;
        if (go_right)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

UniformBoundedIndex::UniformBoundedIndex(std::vector<UncertainPoint> pts) : pts_(std::move(pts)) {
    if (pts_.empty()) fail(Errc::empty_input, "index over zero points");
    struct Rec {
        double lo, hi;
        Line l;
        int id;
    };
    std::vector<Rec> recs;
    recs.reserve(pts_.size());
    std::vector<DominanceMinIndex::Pt> cert, strad;
    std::vector<ZMaxTree::Pt> zpts;
    for (size_t i = 0; i < pts_.size(); ++i) {
        const UncertainPoint& p = pts_[i];
        if (!p.is_uniform()) fail(Errc::not_uniform, "uniform index fed a histogram point");
        const CdfPiece mid = p.cdf.pieces()[1];
        recs.push_back({p.support_lo, p.support_hi, Line{mid.a, mid.b, p.id, 1}, p.id});
        cert.push_back({p.support_lo, p.support_hi, 0.0, p.id});
        strad.push_back({p.support_lo, p.support_hi, -mid.a, p.id});
        zpts.push_back({p.support_lo, p.support_hi, mid.a, p.id});
        id_index_.push_back({p.id, i});
        min_id_ = (min_id_ < 0) ? p.id : std::min(min_id_, p.id);
    }
    std::sort(id_index_.begin(), id_index_.end());
    for (size_t i = 1; i < id_index_.size(); ++i)
        check(id_index_[i - 1].first != id_index_[i].first, "duplicate point id");

    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.id < b.id;
    });
    std::vector<HalfplaneTree::KeyedLine> kl;
    std::vector<Line> ll;
    for (const Rec& r : recs) {
        los_sorted_.push_back(r.lo);
        kl.push_back({r.lo, r.l});
        ll.push_back(r.l);
    }
    tl_ = HalfplaneTree(HalfplaneTree::Mode::point_suffix, std::move(kl));
    envl_ = PersistentEnvelope::over_suffixes(ll);

    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.hi != b.hi) return a.hi < b.hi;
        return a.id < b.id;
    });
    std::vector<HalfplaneTree::KeyedLine> kr;
    std::vector<Line> lr;
    for (const Rec& r : recs) {
        his_sorted_.push_back(r.hi);
        const Line flip{-r.l.a, 1.0 - r.l.b, r.id, 1};
        kr.push_back({r.hi, flip});
        lr.push_back(flip);
    }
    tr_ = HalfplaneTree(HalfplaneTree::Mode::point_prefix, std::move(kr));
    envr_ = PersistentEnvelope::over_prefixes(lr);

    certain_ = DominanceMinIndex(std::move(cert));
    straddle_ = DominanceMinIndex(std::move(strad));
    zmax_ = ZMaxTree(std::move(zpts));
}

const UncertainPoint& UniformBoundedIndex::by_id(int id) const {
    auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::pair<int, size_t>{id, 0});
    check(it != id_index_.end() && it->first == id, "unknown point id");
    return pts_[it->second];
}

void UniformBoundedIndex::require_bounded(const QueryInterval& I) const {
    if (!I.bounded())
        fail(Errc::unbounded_interval, "this index handles bounded intervals only");
}

QueryResult UniformBoundedIndex::top1(const QueryInterval& I) const {
    require_bounded(I);
    QueryResult r;
    Counters& c = r.counters;

    // a support inside the interval is certain; the smallest such id wins
    const auto cid = certain_.min_over(I.lo, DominanceMinIndex::Rel::ge, I.hi,
                                       DominanceMinIndex::Rel::le, c);
    if (cid.second >= 0) {
        r.items.push_back({cid.second, 1.0});
        r.counters.reported = 1;
        return r;
    }

    // one champion per relation class; model probability breaks the tie
    Item best{-1, -1.0};
    const auto consider = [&](int id) {
        if (id < 0) return;
        const Item cand{id, prob(id, I)};
        ++c.comparisons;
        if (best.id < 0 || item_before(cand, best)) best = cand;
    };
    const int jl = key_bound(los_sorted_, I.lo, true, c);
    if (jl < int(los_sorted_.size())) {
        const Line* t = envl_.top(jl, I.hi, c);
        if (t) consider(t->owner);
    }
    const int jr = key_bound(his_sorted_, I.hi, false, c);
    if (jr > 0) {
        const Line* t = envr_.top(jr, I.lo, c);
        if (t) consider(t->owner);
    }
    consider(straddle_
                 .min_over(I.lo, DominanceMinIndex::Rel::lt, I.hi, DominanceMinIndex::Rel::gt, c)
                 .second);

    if (best.id < 0 || best.prob <= 0.0) best = {min_id_, 0.0};
    r.items.push_back(best);
    r.counters.reported = 1;
    return r;
}

QueryResult UniformBoundedIndex::topk(const QueryInterval& I, int k, Engine engine) const {
    require_k(k, pts_.size());
    require_bounded(I);
    if (engine == Engine::auto_) engine = Engine::heap;
    if (engine != Engine::heap && engine != Engine::block)
        fail(Errc::capability_mismatch, "this index implements the heap and block engines");
    QueryResult r;
    Counters& c = r.counters;
    const int h = default_block_size(pts_.size());

    std::vector<Scored> pool;
    const auto take = [&pool](const std::vector<Scored>& part) {
        pool.insert(pool.end(), part.begin(), part.end());
    };
    if (engine == Engine::heap) {
        take(tl_.topk_heap(I.lo, I.hi, k, c));
        take(tr_.topk_heap(I.hi, I.lo, k, c));
        for (const auto& [z, id] : zmax_.topk(I.lo, I.hi, k, c)) pool.push_back({z, id});
    } else {
        take(tl_.topk_block(I.lo, I.hi, k, h, c));
        take(tr_.topk_block(I.hi, I.lo, k, h, c));
        for (const auto& [z, id] : zmax_.topk_block(I.lo, I.hi, k, h, c)) pool.push_back({z, id});
    }

    // the classes overlap, so a point can arrive from two structures
    std::sort(pool.begin(), pool.end(),
              [](const Scored& a, const Scored& b) { return a.owner < b.owner; });
    r.items.reserve(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        if (i > 0 && pool[i].owner == pool[i - 1].owner) continue;
        r.items.push_back({pool[i].owner, prob(pool[i].owner, I)});
    }
    std::sort(r.items.begin(), r.items.end(), item_before);
    check(int(r.items.size()) >= k, "class pools under-filled a feasible top-k");
    r.items.resize(size_t(k));
    r.counters.reported = r.items.size();
    return r;
}

QueryResult UniformBoundedIndex::threshold(const QueryInterval& I, double tau) const {
    require_tau(tau);
    require_bounded(I);
    QueryResult r;
    Counters& c = r.counters;
    if (tau == 0.0) {
        for (const auto& [id, idx] : id_index_) r.items.push_back({id, prob(id, I)});
        std::sort(r.items.begin(), r.items.end(), item_before);
        r.counters.reported = r.items.size();
        return r;
    }
    const double bar = tau - kTauSlack;
    std::vector<int> ids;
    tl_.report_above(I.lo, I.hi, bar, ids, c);
    tr_.report_above(I.hi, I.lo, bar, ids, c);
    zmax_.report_geq(I.lo, I.hi, bar / (I.hi - I.lo), ids, c);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids) {
        const double pr = prob(id, I);
        if (pr >= tau) r.items.push_back({id, pr});
    }
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

}  // namespace uqr
