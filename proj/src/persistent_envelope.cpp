#include "uqr/persistent_envelope.hpp"

#include <bit>

#include "uqr/error.hpp"

namespace uqr {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// deterministic shape: the priority is a function of the key alone
uint64_t pri_of(double slope) { return splitmix64(std::bit_cast<uint64_t>(slope)); }

double cross_x(const Line& p, const Line& q) { return (p.b - q.b) / (q.a - p.a); }

// mid drops off the envelope between lo and hi (slopes ascending)
bool redundant(const Line& lo, const Line& mid, const Line& hi) {
    return (mid.b - hi.b) * (mid.a - lo.a) <= (lo.b - mid.b) * (hi.a - mid.a);
}

}  // namespace

int PersistentEnvelope::make(const Line& v, int l, int r) {
    Node n;
    n.val = v;
    n.pri = pri_of(v.a);
    n.l = l;
    n.r = r;
    n.lo = l >= 0 ? arena_[size_t(l)].lo : v;
    n.hi = r >= 0 ? arena_[size_t(r)].hi : v;
    arena_.push_back(n);
    return int(arena_.size()) - 1;
}

int PersistentEnvelope::copy(int t, int l, int r) {
    Node n = arena_[size_t(t)];
    n.l = l;
    n.r = r;
    n.lo = l >= 0 ? arena_[size_t(l)].lo : n.val;
    n.hi = r >= 0 ? arena_[size_t(r)].hi : n.val;
    arena_.push_back(n);
    return int(arena_.size()) - 1;
}

void PersistentEnvelope::split(int t, double a, int& l, int& r) {
    if (t < 0) {
        l = r = -1;
        return;
    }
    const Node& nd = arena_[size_t(t)];
    if (nd.val.a < a) {
        int rl, rr;
        split(nd.r, a, rl, rr);
        l = copy(t, arena_[size_t(t)].l, rl);
        r = rr;
    } else {
        int ll, lr;
        split(nd.l, a, ll, lr);
        l = ll;
        r = copy(t, lr, arena_[size_t(t)].r);
    }
}

int PersistentEnvelope::join(int l, int r) {
    if (l < 0) return r;
    if (r < 0) return l;
    if (arena_[size_t(l)].pri >= arena_[size_t(r)].pri)
        return copy(l, arena_[size_t(l)].l, join(arena_[size_t(l)].r, r));
    return copy(r, join(l, arena_[size_t(r)].l), arena_[size_t(r)].r);
}

int PersistentEnvelope::drop_leftmost(int t) {
    const Node& nd = arena_[size_t(t)];
    if (nd.l < 0) return nd.r;
    return copy(t, drop_leftmost(nd.l), arena_[size_t(t)].r);
}

int PersistentEnvelope::drop_rightmost(int t) {
    const Node& nd = arena_[size_t(t)];
    if (nd.r < 0) return nd.l;
    return copy(t, arena_[size_t(t)].l, drop_rightmost(nd.r));
}

PersistentEnvelope::Probe PersistentEnvelope::probe(int root, double a) const {
    Probe p;
    int t = root;
    while (t >= 0) {
        const Node& nd = arena_[size_t(t)];
        if (nd.val.a == a) {
            p.eq = &nd.val;
            if (nd.l >= 0) p.pred = &arena_[size_t(nd.l)].hi;
            if (nd.r >= 0) p.succ = &arena_[size_t(nd.r)].lo;
            return p;
        }
        if (nd.val.a < a) {
            p.pred = &nd.val;
            t = nd.r;
        } else {
            p.succ = &nd.val;
            t = nd.l;
        }
    }
    return p;
}

int PersistentEnvelope::insert_line(int root, const Line& ln) {
    // probe pointers die on the first arena growth; read them out first
    const Probe pb = probe(root, ln.a);
    const bool had_eq = pb.eq != nullptr;
    if (pb.eq) {
        if (pb.eq->b > ln.b || (pb.eq->b == ln.b && pb.eq->owner <= ln.owner)) return root;
    } else if (pb.pred && pb.succ && redundant(*pb.pred, ln, *pb.succ)) {
        return root;
    }
    int L, R;
    split(root, ln.a, L, R);
    if (had_eq) R = drop_leftmost(R);
    while (L >= 0) {
        const Line m = arena_[size_t(L)].hi;
        const int Lp = drop_rightmost(L);
        if (Lp < 0) break;  // the extreme slope always stays
        if (!redundant(arena_[size_t(Lp)].hi, m, ln)) break;
        L = Lp;
    }
    while (R >= 0) {
        const Line m = arena_[size_t(R)].lo;
        const int Rp = drop_leftmost(R);
        if (Rp < 0) break;
        if (!redundant(ln, m, arena_[size_t(Rp)].lo)) break;
        R = Rp;
    }
    return join(join(L, make(ln, -1, -1)), R);
}

PersistentEnvelope PersistentEnvelope::over_suffixes(const std::vector<Line>& lines) {
    PersistentEnvelope pe;
    const int n = int(lines.size());
    pe.roots_.assign(size_t(n) + 1, -1);
    for (int i = n - 1; i >= 0; --i)
        pe.roots_[size_t(i)] = pe.insert_line(pe.roots_[size_t(i) + 1], lines[size_t(i)]);
    return pe;
}

PersistentEnvelope PersistentEnvelope::over_prefixes(const std::vector<Line>& lines) {
    PersistentEnvelope pe;
    const int n = int(lines.size());
    pe.roots_.assign(size_t(n) + 1, -1);
    for (int j = 1; j <= n; ++j)
        pe.roots_[size_t(j)] = pe.insert_line(pe.roots_[size_t(j) - 1], lines[size_t(j) - 1]);
    return pe;
}

const Line* PersistentEnvelope::top(int version, double x, Counters& c) const {
    int t = roots_[size_t(version)];
    if (t < 0) return nullptr;
    ++c.binary_searches;
    for (;;) {
        const Node& nd = arena_[size_t(t)];
        if (nd.l >= 0) {
            ++c.comparisons;
            if (x < cross_x(arena_[size_t(nd.l)].hi, nd.val)) {
                t = nd.l;
                continue;
            }
        }
        if (nd.r >= 0) {
            ++c.comparisons;
            if (x >= cross_x(nd.val, arena_[size_t(nd.r)].lo)) {
                t = nd.r;
                continue;
            }
        }
        return &nd.val;
    }
}

std::vector<Line> PersistentEnvelope::lines_of(int version) const {
    std::vector<Line> out;
    std::vector<int> stack;
    int t = roots_[size_t(version)];
    while (t >= 0 || !stack.empty()) {
        while (t >= 0) {
            stack.push_back(t);
            t = arena_[size_t(t)].l;
        }
        t = stack.back();
        stack.pop_back();
        out.push_back(arena_[size_t(t)].val);
        t = arena_[size_t(t)].r;
    }
    return out;
}

}  // namespace uqr
