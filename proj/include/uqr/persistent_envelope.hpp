#pragma once

#include <cstdint>
#include <vector>

#include "uqr/counters.hpp"
#include "uqr/envelope.hpp"

namespace uqr {

// Upper envelopes of every prefix (or suffix) of a line sequence, kept as
// treap versions with path copying: version j shares everything with its
// neighbor version except the O(log) nodes the insertion touched. A line
// landing at or below the current envelope leaves the version physically
// identical to the previous one. Keys are slopes; for an exact slope match
// only the higher intercept survives (smaller owner on full ties).
class PersistentEnvelope {
  public:
    PersistentEnvelope() = default;

    // version j = envelope of lines[j..n), built back to front
    static PersistentEnvelope over_suffixes(const std::vector<Line>& lines);
    // version j = envelope of lines[0..j), built front to back
    static PersistentEnvelope over_prefixes(const std::vector<Line>& lines);

    int versions() const { return int(roots_.size()); }
    bool version_empty(int v) const { return roots_[size_t(v)] < 0; }
    // Topmost line of a version at x, nullptr when the version is empty.
    // At a piece boundary the right piece wins.
    const Line* top(int version, double x, Counters& c) const;
    // In-order (slope ascending) lines of a version.
    std::vector<Line> lines_of(int version) const;
    size_t node_count() const { return arena_.size(); }

  private:
    struct Node {
        Line val;
        Line lo, hi;  // leftmost / rightmost line of the subtree
        uint64_t pri;
        int l, r;
    };
    struct Probe {
        const Line* eq = nullptr;
        const Line* pred = nullptr;
        const Line* succ = nullptr;
    };

    int make(const Line& v, int l, int r);
    int copy(int t, int l, int r);
    void split(int t, double a, int& l, int& r);
    int join(int l, int r);
    int drop_leftmost(int t);
    int drop_rightmost(int t);
    Probe probe(int root, double a) const;
    int insert_line(int root, const Line& ln);

    std::vector<Node> arena_;
    std::vector<int> roots_;
};

}  // namespace uqr
