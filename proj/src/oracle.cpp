#include "uqr/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace uqr {

void require_k(int k, size_t n) {
    if (k < 1 || size_t(k) > n) fail(Errc::k_out_of_range, "k must be in [1, n]");
}

void require_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) fail(Errc::tau_out_of_range, "tau must be in [0, 1]");
}

std::vector<Item> brute_all(const std::vector<UncertainPoint>& pts, const QueryInterval& I) {
    std::vector<Item> out;
    out.reserve(pts.size());
    for (const UncertainPoint& p : pts) out.push_back({p.id, interval_probability(p, I)});
    std::sort(out.begin(), out.end(), item_before);
    return out;
}

Item brute_top1(const std::vector<UncertainPoint>& pts, const QueryInterval& I) {
    if (pts.empty()) fail(Errc::empty_input, "top1 on empty point set");
    Item best{-1, -1.0};
    for (const UncertainPoint& p : pts) {
        Item it{p.id, interval_probability(p, I)};
        if (best.id < 0 || item_before(it, best)) best = it;
    }
    return best;
}

std::vector<Item> brute_topk(const std::vector<UncertainPoint>& pts, const QueryInterval& I, int k) {
    require_k(k, pts.size());
    std::vector<Item> all = brute_all(pts, I);
    all.resize(size_t(k));
    return all;
}

std::vector<Item> brute_threshold(const std::vector<UncertainPoint>& pts, const QueryInterval& I,
                                  double tau) {
    require_tau(tau);
    std::vector<Item> out;
    for (const UncertainPoint& p : pts) {
        double pr = interval_probability(p, I);
        if (pr >= tau) out.push_back({p.id, pr});
    }
    std::sort(out.begin(), out.end(), item_before);
    return out;
}

namespace {

const UncertainPoint* find_point(const std::vector<UncertainPoint>& pts, int id) {
    for (const UncertainPoint& p : pts)
        if (p.id == id) return &p;
    return nullptr;
}

bool canonical_order(const std::vector<Item>& items) {
    for (size_t i = 1; i < items.size(); ++i)
        if (!item_before(items[i - 1], items[i])) return false;
    return true;
}

}  // namespace

bool top1_matches(const Item& got, const std::vector<UncertainPoint>& pts, const QueryInterval& I,
                  double tol) {
    const UncertainPoint* p = find_point(pts, got.id);
    if (!p) return false;
    if (interval_probability(*p, I) != got.prob) return false;
    Item best = brute_top1(pts, I);
    return std::abs(got.prob - best.prob) <= tol;
}

bool topk_matches(const std::vector<Item>& got, const std::vector<UncertainPoint>& pts,
                  const QueryInterval& I, int k, double tol) {
    if (int(got.size()) != k) return false;
    if (!canonical_order(got)) return false;  // also implies distinct ids
    std::vector<Item> full = brute_all(pts, I);
    for (int i = 0; i < k; ++i)
        if (std::abs(got[size_t(i)].prob - full[size_t(i)].prob) > tol) return false;
    for (const Item& it : got) {
        const UncertainPoint* p = find_point(pts, it.id);
        if (!p || interval_probability(*p, I) != it.prob) return false;
    }
    const double cut = full[size_t(k) - 1].prob;
    for (int i = 0; i < k; ++i) {
        if (full[size_t(i)].prob > cut + tol) {
            if (got[size_t(i)].id != full[size_t(i)].id) return false;
        } else {
            // inside the cut tie group any distinct member of the oracle's
            // equal-probability population is acceptable
            if (std::abs(got[size_t(i)].prob - cut) > tol) return false;
        }
    }
    return true;
}

bool threshold_matches(const std::vector<Item>& got, const std::vector<UncertainPoint>& pts,
                       const QueryInterval& I, double tau) {
    std::vector<Item> want = brute_threshold(pts, I, tau);
    if (got.size() != want.size()) return false;
    if (!canonical_order(got)) return false;
    for (size_t i = 0; i < got.size(); ++i)
        if (got[i].id != want[i].id || got[i].prob != want[i].prob) return false;
    return true;
}

}  // namespace uqr
