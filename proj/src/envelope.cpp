#include "uqr/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uqr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool slope_order(const Line& p, const Line& q) {
    if (p.a != q.a) return p.a < q.a;
    if (p.b != q.b) return p.b > q.b;
    if (p.owner != q.owner) return p.owner < q.owner;
    return p.piece < q.piece;
}

double cross_x(const Line& p, const Line& q) { return (p.b - q.b) / (q.a - p.a); }

// Envelope scan over idx (indices into lines, slope order, pairwise-distinct
// (a,b)). Same-slope lines after the first are skipped; skipped and popped
// lines are exactly what deeper layers get.
void envelope_scan(const std::vector<Line>& lines, const std::vector<int>& idx,
                   std::vector<int>& picked, std::vector<double>& breaks) {
    picked.clear();
    breaks.clear();
    for (int id : idx) {
        const Line& n = lines[size_t(id)];
        if (!picked.empty() && lines[size_t(picked.back())].a == n.a) continue;
        while (!picked.empty()) {
            const Line& p = lines[size_t(picked.back())];
            if (picked.size() == 1) {
                breaks.push_back(cross_x(p, n));
                break;
            }
            const Line& q = lines[picked.size() >= 2 ? size_t(picked[picked.size() - 2]) : 0];
            // p never strictly on top iff its crossing with n is not to the
            // right of its crossing with q.
            if ((p.b - n.b) * (p.a - q.a) <= (q.b - p.b) * (n.a - p.a)) {
                picked.pop_back();
                breaks.pop_back();
            } else {
                breaks.push_back(cross_x(p, n));
                break;
            }
        }
        picked.push_back(id);
    }
    for (size_t i = 1; i < breaks.size(); ++i)
        check(breaks[i] >= breaks[i - 1], "envelope breaks out of order");
}

void check_distinct(const std::vector<Line>& sorted_lines) {
    for (size_t i = 1; i < sorted_lines.size(); ++i)
        check(!same_line(sorted_lines[i - 1], sorted_lines[i]),
              "duplicate (a,b) line reached the envelope; dedup first");
}

}  // namespace

DedupResult dedup_lines(std::vector<Line> lines) {
    std::sort(lines.begin(), lines.end(), [](const Line& p, const Line& q) {
        if (p.a != q.a) return p.a < q.a;
        if (p.b != q.b) return p.b < q.b;
        if (p.owner != q.owner) return p.owner < q.owner;
        return p.piece < q.piece;
    });
    DedupResult r;
    for (size_t i = 0; i < lines.size();) {
        size_t j = i;
        std::vector<int> owners;
        while (j < lines.size() && same_line(lines[j], lines[i])) {
            if (owners.empty() || owners.back() != lines[j].owner) owners.push_back(lines[j].owner);
            ++j;
        }
        r.lines.push_back(lines[i]);
        r.lines.back().slot = int(r.lines.size()) - 1;
        r.owners.push_back(std::move(owners));
        i = j;
    }
    return r;
}

int EnvelopeChain::top_piece(double x) const {
    return int(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
}

EnvelopeChain upper_envelope(std::vector<Line> lines) {
    if (lines.empty()) fail(Errc::empty_input, "envelope of zero lines");
    std::sort(lines.begin(), lines.end(), slope_order);
    check_distinct(lines);
    std::vector<int> idx(lines.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = int(i);
    std::vector<int> picked;
    std::vector<double> breaks;
    envelope_scan(lines, idx, picked, breaks);
    EnvelopeChain ch;
    ch.lines.reserve(picked.size());
    for (int i : picked) ch.lines.push_back(lines[size_t(i)]);
    ch.breaks = std::move(breaks);
    return ch;
}

std::vector<EnvelopeChain> peel_layers(std::vector<Line> lines) {
    if (lines.empty()) fail(Errc::empty_input, "peeling zero lines");
    std::sort(lines.begin(), lines.end(), slope_order);
    check_distinct(lines);
    std::vector<int> rem(lines.size());
    for (size_t i = 0; i < rem.size(); ++i) rem[i] = int(i);
    std::vector<EnvelopeChain> layers;
    std::vector<int> picked;
    std::vector<double> breaks;
    std::vector<char> taken(lines.size(), 0);
    while (!rem.empty()) {
        envelope_scan(lines, rem, picked, breaks);
        EnvelopeChain ch;
        ch.lines.reserve(picked.size());
        for (int i : picked) {
            ch.lines.push_back(lines[size_t(i)]);
            taken[size_t(i)] = 1;
        }
        ch.breaks = breaks;
        layers.push_back(std::move(ch));
        std::vector<int> next;
        next.reserve(rem.size() - picked.size());
        for (int i : rem)
            if (!taken[size_t(i)]) next.push_back(i);
        rem.swap(next);
    }
    return layers;
}

CascadeBridges::CascadeBridges(const std::vector<EnvelopeChain>& layers) {
    int D = int(layers.size());
    catalogs_.resize(size_t(D));
    for (int i = D - 1; i >= 0; --i) {
        const EnvelopeChain& ch = layers[size_t(i)];
        std::vector<double> starts;
        starts.reserve(ch.size());
        starts.push_back(kNegInf);
        for (double b : ch.breaks) starts.push_back(b);

        std::vector<double> merged = starts;
        const std::vector<Entry>* next = (i + 1 < D) ? &catalogs_[size_t(i) + 1] : nullptr;
        if (next)
            for (size_t s = 0; s < next->size(); s += 2) merged.push_back((*next)[s].x);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        std::vector<Entry>& cat = catalogs_[size_t(i)];
        cat.reserve(merged.size());
        size_t ps = 0;
        size_t bs = 0;
        for (double x : merged) {
            while (ps + 1 < starts.size() && starts[ps + 1] <= x) ++ps;
            int bridge = -1;
            if (next) {
                while (bs + 2 < next->size() && (*next)[bs + 2].x <= x) bs += 2;
                bridge = int(bs);
            }
            cat.push_back({x, int(ps), bridge});
        }
    }
}

int CascadeBridges::Walk::piece() const {
    return cb_->catalogs_[size_t(layer_)][size_t(pos_)].own_piece;
}

bool CascadeBridges::Walk::last_layer() const { return layer_ + 1 >= cb_->layer_count(); }

void CascadeBridges::Walk::descend(Counters& c) {
    const Entry& cur = cb_->catalogs_[size_t(layer_)][size_t(pos_)];
    const std::vector<Entry>& cat = cb_->catalogs_[size_t(layer_) + 1];
    int p = cur.bridge;
    int steps = 0;
    while (p + 1 < int(cat.size())) {
        ++c.comparisons;
        if (cat[size_t(p) + 1].x <= x_) {
            ++p;
            ++c.bridge_steps;
            ++steps;
        } else {
            break;
        }
    }
    check(steps <= 2, "cascade bridge drifted more than two entries");
    ++layer_;
    pos_ = p;
}

CascadeBridges::Walk CascadeBridges::walk_from_top(double x, Counters& c) const {
    Walk w;
    w.cb_ = this;
    w.x_ = x;
    w.layer_ = 0;
    ++c.binary_searches;
    w.pos_ = detail::last_leq(catalogs_.front(), x, [](const Entry& e) { return e.x; }, c);
    check(w.pos_ >= 0, "cascade sentinel missing");
    return w;
}

CascadeBridges::Walk CascadeBridges::walk_at(int pos0, double x, Counters& c) const {
    Walk w;
    w.cb_ = this;
    w.x_ = x;
    w.layer_ = 0;
    const std::vector<Entry>& cat = catalogs_.front();
    int p = pos0;
    int steps = 0;
    while (p + 1 < int(cat.size())) {
        ++c.comparisons;
        if (cat[size_t(p) + 1].x <= x) {
            ++p;
            ++c.bridge_steps;
            ++steps;
        } else {
            break;
        }
    }
    check(steps <= 2, "seeded cascade position drifted more than two entries");
    w.pos_ = p;
    return w;
}

namespace {

void append_piece(std::vector<Segment>& out, Segment s) {
    if (!(s.x1 > s.x0)) return;
    if (!out.empty()) {
        Segment& t = out.back();
        if (t.a == s.a && t.b == s.b && t.owner == s.owner && t.piece == s.piece && t.x1 == s.x0) {
            t.x1 = s.x1;
            return;
        }
    }
    out.push_back(s);
}

std::vector<Segment> merge_envelopes(const std::vector<Segment>& P, const std::vector<Segment>& Q) {
    std::vector<Segment> out;
    out.reserve(P.size() + Q.size());
    size_t i = 0, j = 0;
    double cur = P.front().x0;
    const double stop = P.back().x1;
    auto emit = [&out](const Segment& w, double x0, double x1) {
        Segment s = w;
        s.x0 = x0;
        s.x1 = x1;
        append_piece(out, s);
    };
    while (cur < stop) {
        const Segment& p = P[i];
        const Segment& q = Q[j];
        double end = std::min(p.x1, q.x1);
        double pu = p.eval(cur), qu = q.eval(cur);
        double pv = p.eval(end), qv = q.eval(end);
        if (pu == qu && pv == qv) {
            emit(p.owner <= q.owner ? p : q, cur, end);
        } else if (pu >= qu && pv >= qv) {
            emit(p, cur, end);
        } else if (qu >= pu && qv >= pv) {
            emit(q, cur, end);
        } else {
            double xs = (q.b - p.b) / (p.a - q.a);
            if (!(xs > cur)) xs = cur;
            if (!(xs < end)) xs = end;
            const Segment& lw = (pu > qu) ? p : q;
            const Segment& rw = (pu > qu) ? q : p;
            emit(lw, cur, xs);
            emit(rw, xs, end);
        }
        if (p.x1 == end) ++i;
        if (q.x1 == end) ++j;
        cur = end;
    }
    return out;
}

}  // namespace

SegmentEnvelope SegmentEnvelope::build(const std::vector<std::vector<Segment>>& curves) {
    if (curves.empty()) fail(Errc::empty_input, "segment envelope of zero curves");
    const double lo = curves.front().front().x0;
    const double hi = curves.front().back().x1;
    for (const auto& c : curves) {
        if (c.empty()) fail(Errc::empty_input, "curve with zero segments");
        for (const Segment& s : c)
            if (!(s.x0 < s.x1)) fail(Errc::vertical_segment, "segment needs x0 < x1");
        check(c.front().x0 == lo && c.back().x1 == hi, "curves must share one x-range");
        for (size_t k = 1; k < c.size(); ++k)
            check(c[k - 1].x1 == c[k].x0, "curve must cover its range contiguously");
    }
    std::vector<std::vector<Segment>> level = curves;
    while (level.size() > 1) {
        std::vector<std::vector<Segment>> up;
        up.reserve((level.size() + 1) / 2);
        for (size_t k = 0; k + 1 < level.size(); k += 2)
            up.push_back(merge_envelopes(level[k], level[k + 1]));
        if (level.size() % 2) up.push_back(std::move(level.back()));
        level.swap(up);
    }
    SegmentEnvelope env;
    env.pieces_ = std::move(level.front());
    return env;
}

const Segment& SegmentEnvelope::locate(double x, Counters& c) const {
    x = std::min(hi(), std::max(lo(), x));
    ++c.binary_searches;
    int idx = detail::last_leq(pieces_, x, [](const Segment& s) { return s.x0; }, c);
    if (idx < 0) idx = 0;
    return pieces_[size_t(idx)];
}

}  // namespace uqr
