#include "uqr/histogram_bounded.hpp"

#include <algorithm>
#include <limits>

#include "uqr/error.hpp"
#include "uqr/oracle.hpp"

namespace uqr {

namespace {

bool pair_before(const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
}

int ceil_log2(size_t n) {
    int l = 0;
    while ((size_t(1) << l) < n) ++l;
    return l;
}

// Rank view of one plane set at a fixed query: values materialize up front,
// the sorted prefix grows by doubling partial selections.
class SetRanks final : public RankedSet {
  public:
    SetRanks(const PlaneSet& s, double lo, double hi, Counters& c) {
        vals_.reserve(size_t(s.size()));
        for (int i = 0; i < s.size(); ++i) {
            const PoolPlane& p = s.member(i);
            vals_.push_back({p.value(lo, hi), p.owner});
        }
        c.element_accesses += vals_.size();
    }

    int size() const override { return int(vals_.size()); }

    std::pair<double, int> at(int rank, Counters& c) override {
        if (rank < 0 || rank >= int(vals_.size()))
            fail(Errc::not_enough_elements, "rank past the end of a plane set");
        if (sorted_ <= rank) {
            int target = std::min(int(vals_.size()), std::max(rank + 1, 2 * sorted_));
            c.element_accesses += size_t(int(vals_.size()) - sorted_);
            std::nth_element(vals_.begin() + sorted_, vals_.begin() + (target - 1), vals_.end(),
                             pair_before);
            std::sort(vals_.begin() + sorted_, vals_.begin() + target, pair_before);
            sorted_ = target;
        }
        return vals_[size_t(rank)];
    }

  private:
    std::vector<std::pair<double, int>> vals_;
    int sorted_ = 0;
};

}  // namespace

std::vector<std::pair<double, int>> PlaneSet::t_highest(double lo, double hi, int t,
                                                        Counters& c) const {
    if (ids_.empty()) fail(Errc::empty_set, "t_highest over an empty set");
    if (t < 1) fail(Errc::k_out_of_range, "t_highest needs t >= 1");
    std::vector<std::pair<double, int>> vals;
    vals.reserve(ids_.size());
    for (int i = 0; i < size(); ++i) {
        const PoolPlane& p = member(i);
        vals.push_back({p.value(lo, hi), p.owner});
    }
    c.element_accesses += vals.size();
    size_t tt = std::min(size_t(t), vals.size());
    std::nth_element(vals.begin(), vals.begin() + long(tt) - 1, vals.end(), pair_before);
    vals.resize(tt);
    std::sort(vals.begin(), vals.end(), pair_before);
    return vals;
}

const Plane3& PlaneSet::locate_max(double lo, double hi, Counters& c) const {
    std::call_once(once_, [this] {
        std::vector<Plane3> ps;
        ps.reserve(ids_.size());
        for (int i = 0; i < size(); ++i) ps.push_back(member(i).projected());
        env_ = std::make_unique<ProjectedPlaneEnvelope>(std::move(ps));
    });
    return env_->locate(lo, hi, c);
}

double PlaneSet::member_value(int owner, double lo, double hi) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), owner, [this](int32_t id, int o) {
        return (*pool_)[size_t(id)].owner < o;
    });
    check(it != ids_.end() && (*pool_)[size_t(*it)].owner == owner, "owner not in this set");
    return (*pool_)[size_t(*it)].value(lo, hi);
}

std::vector<std::pair<double, int>> doubling_topk(const std::vector<RankedSet*>& sets, int k,
                                                  int lambda, Counters& c) {
    if (k < 1) fail(Errc::k_out_of_range, "doubling merge needs k >= 1");
    lambda = std::max(lambda, 1);
    size_t total = 0;
    for (RankedSet* s : sets) total += size_t(s->size());
    if (total < size_t(k)) fail(Errc::not_enough_elements, "fewer entries than k across the sets");

    struct St {
        int m = 0;         // current prefix length
        int consumed = 0;  // prefix length already merged into the union
    };
    std::vector<St> st(sets.size());
    struct Ent {
        double z;
        int set;
    };
    auto worse = [](const Ent& a, const Ent& b) { return a.z < b.z; };
    std::vector<Ent> heap;
    heap.reserve(sets.size());
    for (size_t i = 0; i < sets.size(); ++i) {
        int sz = sets[i]->size();
        if (sz == 0) continue;
        st[i].m = std::min(lambda, sz);
        heap.push_back({sets[i]->at(st[i].m - 1, c).first, int(i)});
        ++c.heap_ops;
    }
    std::make_heap(heap.begin(), heap.end(), worse);

    const double ninf = -std::numeric_limits<double>::infinity();
    int r = 0;
    double sigma = 0.0;
    double consumed_min = std::numeric_limits<double>::infinity();
    while (r < k && !heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        Ent top = heap.back();
        heap.pop_back();
        ++c.heap_ops;
        ++c.extract_max;
        if (top.z == ninf) break;  // nothing unconsumed anywhere
        St& s = st[size_t(top.set)];
        int fresh = s.m - s.consumed;
        if (fresh >= lambda) ++c.full_extractions;
        if (checks_enabled()) {
            Counters scratch;
            for (int q = s.consumed; q < s.m; ++q)
                consumed_min = std::min(consumed_min, sets[size_t(top.set)]->at(q, scratch).first);
        }
        s.consumed = s.m;
        r += fresh;
        sigma = top.z;
        if (r >= k) break;  // the stopping source keeps its consumed prefix
        int next = std::min(sets[size_t(top.set)]->size(), 2 * s.m);
        if (next == s.m) {
            heap.push_back({ninf, top.set});
        } else {
            s.m = next;
            heap.push_back({sets[size_t(top.set)]->at(next - 1, c).first, top.set});
        }
        std::push_heap(heap.begin(), heap.end(), worse);
        ++c.heap_ops;
    }
    check(r == 0 || sigma == consumed_min, "last extracted key must be the union minimum");

    std::vector<std::pair<double, int>> pool;
    pool.reserve(size_t(2 * k) + sets.size() * size_t(lambda));
    for (size_t i = 0; i < sets.size(); ++i)
        for (int q = 0; q < st[i].m; ++q) pool.push_back(sets[i]->at(q, c));
    check(pool.size() >= size_t(k), "gathered prefixes cannot be smaller than k");
    check(pool.size() <= size_t(2 * k) + sets.size() * size_t(lambda),
          "gathered prefixes exceed the doubling bound");

    std::nth_element(pool.begin(), pool.begin() + (k - 1), pool.end(), pair_before);
    double zk = pool[size_t(k) - 1].first;
    // drain cut ties so exact equality cannot hide a smaller owner
    for (size_t i = 0; i < sets.size(); ++i) {
        int sz = sets[i]->size();
        for (int q = st[i].m; q < sz; ++q) {
            std::pair<double, int> e = sets[i]->at(q, c);
            ++c.comparisons;
            if (e.first < zk) break;
            pool.push_back(e);
        }
    }
    std::sort(pool.begin(), pool.end(), pair_before);
    pool.resize(size_t(k));
    return pool;
}

HistogramBoundedIndex::HistogramBoundedIndex(std::vector<UncertainPoint> pts)
    : pts_(std::move(pts)) {
    if (pts_.empty()) fail(Errc::empty_input, "index over zero points");
    for (size_t i = 0; i < pts_.size(); ++i) {
        const UncertainPoint& p = pts_[i];
        if (p.is_uniform()) fail(Errc::invalid_pdf, "histogram index fed a uniform point");
        for (double b : p.cdf.breaks()) xbounds_.push_back(b);
        id_index_.push_back({p.id, i});
        min_id_ = (min_id_ < 0) ? p.id : std::min(min_id_, p.id);
    }
    std::sort(id_index_.begin(), id_index_.end());
    for (size_t i = 1; i < id_index_.size(); ++i)
        check(id_index_[i - 1].first != id_index_[i].first, "duplicate point id");
    std::sort(xbounds_.begin(), xbounds_.end());
    xbounds_.erase(std::unique(xbounds_.begin(), xbounds_.end()), xbounds_.end());

    const int xslabs = int(xbounds_.size()) + 1;
    while (xpow2_ < xslabs) xpow2_ <<= 1;
    outer_.resize(size_t(2 * xpow2_));

    auto bound_pos = [this](double v) {
        return int(std::lower_bound(xbounds_.begin(), xbounds_.end(), v) - xbounds_.begin());
    };

    // Stage every piece-pair rectangle at its outer canonical nodes.
    struct Stage {
        double ylo, yhi;
        int32_t plane;
    };
    std::vector<std::vector<Stage>> stage(size_t(2 * xpow2_));
    auto assign_outer = [&](int s0, int s1, const Stage& sg) {
        int lo = s0 + xpow2_, hi = s1 + xpow2_;
        // cover [s0, s1) bottom-up, peeling canonical nodes off both ends
        while (lo < hi) {
            if (lo & 1) stage[size_t(lo++)].push_back(sg);
            if (hi & 1) stage[size_t(--hi)].push_back(sg);
            lo >>= 1;
            hi >>= 1;
        }
    };
    for (const UncertainPoint& p : pts_) {
        const std::vector<double>& br = p.cdf.breaks();
        const std::vector<CdfPiece>& pc = p.cdf.pieces();
        for (size_t i = 0; i < pc.size(); ++i) {
            int s0 = i == 0 ? 0 : bound_pos(br[i - 1]) + 1;
            int s1 = i == br.size() ? xslabs : bound_pos(br[i]) + 1;
            for (size_t j = i; j < pc.size(); ++j) {
                double ylo = j == 0 ? -kInf : br[j - 1];
                double yhi = j == br.size() ? kInf : br[j];
                int32_t plane = int32_t(pool_.size());
                pool_.push_back({pc[i].a, pc[i].b, pc[j].a, pc[j].b, p.id});
                assign_outer(s0, s1, {ylo, yhi, plane});
            }
        }
    }

    // Materialize the inner trees over each node's own hi-endpoints.
    for (size_t v = 1; v < stage.size(); ++v) {
        std::vector<Stage>& rects = stage[v];
        if (rects.empty()) continue;
        auto tree = std::make_unique<InnerTree>();
        for (const Stage& sg : rects) {
            if (sg.ylo > -kInf) tree->bounds.push_back(sg.ylo);
            if (sg.yhi < kInf) tree->bounds.push_back(sg.yhi);
        }
        std::sort(tree->bounds.begin(), tree->bounds.end());
        tree->bounds.erase(std::unique(tree->bounds.begin(), tree->bounds.end()),
                           tree->bounds.end());
        const int yslabs = int(tree->bounds.size()) + 1;
        while (tree->pow2 < yslabs) tree->pow2 <<= 1;
        tree->set_at.assign(size_t(2 * tree->pow2), -1);
        auto ypos = [&tree](double w) {
            return int(std::lower_bound(tree->bounds.begin(), tree->bounds.end(), w) -
                       tree->bounds.begin());
        };
        for (const Stage& sg : rects) {
            int t0 = sg.ylo == -kInf ? 0 : ypos(sg.ylo) + 1;
            int t1 = sg.yhi == kInf ? yslabs : ypos(sg.yhi) + 1;
            int lo = t0 + tree->pow2, hi = t1 + tree->pow2;
            while (lo < hi) {
                auto put = [&](int w) {
                    int32_t idx = tree->set_at[size_t(w)];
                    if (idx < 0) {
                        idx = int32_t(sets_.size());
                        sets_.emplace_back();
                        tree->set_at[size_t(w)] = idx;
                    }
                    sets_[size_t(idx)].ids_.push_back(sg.plane);
                };
                if (lo & 1) put(lo++);
                if (hi & 1) put(--hi);
                lo >>= 1;
                hi >>= 1;
            }
        }
        outer_[v] = std::move(tree);
        rects.clear();
        rects.shrink_to_fit();
    }

    for (PlaneSet& s : sets_) {
        s.pool_ = &pool_;
        std::sort(s.ids_.begin(), s.ids_.end(), [this](int32_t a, int32_t b) {
            return pool_[size_t(a)].owner < pool_[size_t(b)].owner;
        });
        s.ids_.shrink_to_fit();
    }
}

const UncertainPoint& HistogramBoundedIndex::by_id(int id) const {
    auto it = std::lower_bound(id_index_.begin(), id_index_.end(), std::pair<int, size_t>{id, 0});
    check(it != id_index_.end() && it->first == id, "unknown point id");
    return pts_[it->second];
}

void HistogramBoundedIndex::require_bounded(const QueryInterval& I) const {
    if (!I.bounded()) fail(Errc::unbounded_interval, "this index handles bounded intervals only");
}

std::vector<const PlaneSet*> HistogramBoundedIndex::canonical_sets(const QueryInterval& I,
                                                                   Counters& c) const {
    require_bounded(I);
    std::vector<const PlaneSet*> out;
    ++c.binary_searches;
    int xs = int(std::upper_bound(xbounds_.begin(), xbounds_.end(), I.lo) - xbounds_.begin());
    for (int v = xpow2_ + xs; v >= 1; v >>= 1) {
        const InnerTree* t = outer_[size_t(v)].get();
        if (!t) continue;
        ++c.binary_searches;
        int ys = int(std::upper_bound(t->bounds.begin(), t->bounds.end(), I.hi) -
                     t->bounds.begin());
        for (int w = t->pow2 + ys; w >= 1; w >>= 1) {
            int32_t idx = t->set_at[size_t(w)];
            if (idx >= 0) out.push_back(&sets_[size_t(idx)]);
        }
    }
    c.sets_visited += out.size();
    if (checks_enabled()) {
        std::vector<int> cnt(pts_.size(), 0);
        size_t total = 0;
        for (const PlaneSet* s : out)
            for (int i = 0; i < s->size(); ++i) {
                auto it = std::lower_bound(id_index_.begin(), id_index_.end(),
                                           std::pair<int, size_t>{s->member(i).owner, 0});
                ++cnt[it->second];
                ++total;
            }
        bool once = total == pts_.size();
        for (int n : cnt) once = once && n == 1;
        check(once, "canonical family must hold exactly one plane per point");
    }
    return out;
}

QueryResult HistogramBoundedIndex::top1(const QueryInterval& I) const {
    QueryResult r;
    std::vector<const PlaneSet*> sets = canonical_sets(I, r.counters);
    int best = -1;
    double bp = -1.0;
    for (const PlaneSet* s : sets) {
        const Plane3& cand = s->locate_max(I.lo, I.hi, r.counters);
        double pr = prob(cand.owner, I);
        ++r.counters.comparisons;
        if (pr > bp || (pr == bp && cand.owner < best)) {
            best = cand.owner;
            bp = pr;
        }
    }
    if (bp <= 0.0) {
        best = min_id_;
        bp = 0.0;
    }
    r.items.push_back({best, bp});
    r.counters.reported = 1;
    return r;
}

QueryResult HistogramBoundedIndex::topk(const QueryInterval& I, int k, Engine engine) const {
    if (engine != Engine::auto_)
        fail(Errc::capability_mismatch, "the bounded histogram index has one engine");
    require_k(k, pts_.size());
    QueryResult r;
    std::vector<const PlaneSet*> sets = canonical_sets(I, r.counters);
    std::deque<SetRanks> owned;
    std::vector<RankedSet*> views;
    views.reserve(sets.size());
    for (const PlaneSet* s : sets) {
        owned.emplace_back(*s, I.lo, I.hi, r.counters);
        views.push_back(&owned.back());
    }
    int lambda = std::max(1, ceil_log2(pts_.size()));
    std::vector<std::pair<double, int>> got = doubling_topk(views, k, lambda, r.counters);
    r.items.reserve(got.size());
    for (const auto& e : got) r.items.push_back({e.second, prob(e.second, I)});
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

QueryResult HistogramBoundedIndex::threshold(const QueryInterval& I, double tau) const {
    require_tau(tau);
    QueryResult r;
    std::vector<const PlaneSet*> sets = canonical_sets(I, r.counters);
    const double bar = tau - kTauSlack;
    for (const PlaneSet* s : sets) {
        if (tau > 0.0) {
            const Plane3& cand = s->locate_max(I.lo, I.hi, r.counters);
            ++r.counters.comparisons;
            if (s->member_value(cand.owner, I.lo, I.hi) < bar) continue;
        }
        r.counters.element_accesses += size_t(s->size());
        for (int i = 0; i < s->size(); ++i) {
            const PoolPlane& p = s->member(i);
            if (p.value(I.lo, I.hi) >= bar) {
                double pr = prob(p.owner, I);
                if (pr >= tau) r.items.push_back({p.owner, pr});
            }
        }
    }
    std::sort(r.items.begin(), r.items.end(), item_before);
    r.counters.reported = r.items.size();
    return r;
}

}  // namespace uqr
