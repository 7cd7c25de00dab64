#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

namespace uqr {

// Smallest id among entries whose key falls on one side of a threshold.
// Prefix/suffix minima over the key-sorted order, one binary search per query.
class MinIdByKey {
  public:
    MinIdByKey() = default;

    explicit MinIdByKey(std::vector<std::pair<double, int>> key_id) : e_(std::move(key_id)) {
        std::sort(e_.begin(), e_.end());
        prefix_.resize(e_.size());
        suffix_.resize(e_.size());
        int m = std::numeric_limits<int>::max();
        for (size_t i = 0; i < e_.size(); ++i) prefix_[i] = m = std::min(m, e_[i].second);
        m = std::numeric_limits<int>::max();
        for (size_t i = e_.size(); i-- > 0;) suffix_[i] = m = std::min(m, e_[i].second);
    }

    // -1 when the side is empty.
    int min_id_key_leq(double x) const {
        auto it = std::upper_bound(e_.begin(), e_.end(), x, cmp_val_first);
        return it == e_.begin() ? -1 : prefix_[size_t(it - e_.begin()) - 1];
    }
    int min_id_key_lt(double x) const {
        auto it = std::lower_bound(e_.begin(), e_.end(), x, cmp_first_val);
        return it == e_.begin() ? -1 : prefix_[size_t(it - e_.begin()) - 1];
    }
    int min_id_key_geq(double x) const {
        auto it = std::lower_bound(e_.begin(), e_.end(), x, cmp_first_val);
        return it == e_.end() ? -1 : suffix_[size_t(it - e_.begin())];
    }
    int min_id_key_gt(double x) const {
        auto it = std::upper_bound(e_.begin(), e_.end(), x, cmp_val_first);
        return it == e_.end() ? -1 : suffix_[size_t(it - e_.begin())];
    }

  private:
    static bool cmp_val_first(double x, const std::pair<double, int>& e) { return x < e.first; }
    static bool cmp_first_val(const std::pair<double, int>& e, double x) { return e.first < x; }

    std::vector<std::pair<double, int>> e_;
    std::vector<int> prefix_;
    std::vector<int> suffix_;
};

}  // namespace uqr
