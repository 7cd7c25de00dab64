#pragma once

#include <vector>

#include "uqr/counters.hpp"
#include "uqr/envelope.hpp"

namespace uqr {

struct Scored {
    double h = 0.0;
    int owner = -1;
};

// Height descending, owner ascending.
inline bool scored_before(const Scored& a, const Scored& b) {
    if (a.h != b.h) return a.h > b.h;
    return a.owner < b.owner;
}

// Static index over lines answering, at a query abscissa x: all lines with
// height >= y, and the k highest lines. Lines are deduplicated by exact
// (a,b); one representative per group stays in the layered envelopes and the
// group's owners expand back out at report time. Layer 0 is the upper
// envelope of everything, deeper layers the peeling leftovers, with
// fractional cascading across the layers' break lists.
class LayeredHalfplaneIndex {
  public:
    LayeredHalfplaneIndex() = default;
    explicit LayeredHalfplaneIndex(std::vector<Line> lines);

    bool empty() const { return expanded_ == 0; }
    int expanded_count() const { return expanded_; }
    int rep_count() const;
    int layer_count() const { return int(layers_.size()); }
    const std::vector<EnvelopeChain>& layers() const { return layers_; }
    const CascadeBridges& cascade() const { return cascade_; }
    const std::vector<int>& owners_of(const Line& rep) const {
        return owners_[size_t(rep.slot)];
    }

    // Owner ids of every line (aliases included) with height >= y at x,
    // appended to out_owners.
    void report_above(double x, double y, std::vector<int>& out_owners, Counters& c) const;
    // Same, entered at a precomputed top-catalog position instead of a search.
    void report_above_at(int pos0, double x, double y, std::vector<int>& out_owners,
                         Counters& c) const;

    // k highest lines at x (aliases count), ties toward smaller owner.
    std::vector<Scored> topk_heap(double x, int k, Counters& c) const;
    std::vector<Scored> topk_select(double x, int k, Counters& c) const;

    const Line& top_line(double x, Counters& c) const;
    double top_height(double x, Counters& c) const;

  private:
    friend class CandidateSearch;

    void report_walk(CascadeBridges::Walk w, double x, double y, std::vector<int>& out_owners,
                     Counters& c) const;

    int expanded_ = 0;
    std::vector<std::vector<int>> owners_;  // by slot
    std::vector<EnvelopeChain> layers_;
    CascadeBridges cascade_;
};

// Best-first search over the candidate frontier of one or more layered
// indexes: per layer a contiguous window around the located top piece, plus
// the next layer's top once a layer's top is consumed. Extracting k lines
// costs O(k) heap operations after the initial locates.
class CandidateSearch {
  public:
    explicit CandidateSearch(Counters& c) : c_(&c) {}

    void add_source(const LayeredHalfplaneIndex& idx, double x);
    // Seed with a precomputed top-catalog position (cross-structure cascade).
    void add_source_at(const LayeredHalfplaneIndex& idx, int pos0, double x);

    // Extract until k lines (aliases count) are on hand, then sort by
    // (height desc, owner asc) and truncate to exactly k.
    std::vector<Scored> run(int k);

  private:
    struct Cand {
        double h;
        int owner;
        const LayeredHalfplaneIndex* idx;
        CascadeBridges::Walk walk;  // meaningful for kind 0 (top)
        int layer;
        int piece;
        double x;
        signed char kind;  // 0 top, -1 moving left, +1 moving right
    };

    void push_cand(const LayeredHalfplaneIndex& idx, double x, int layer, int piece,
                   signed char kind, const CascadeBridges::Walk* walk);

    Counters* c_;
    std::vector<Cand> heap_;
};

// Virtual descending stream for the block-heap engine.
struct StreamItem {
    double h = 0.0;
    int owner = -1;
    int aux = 0;     // caller-defined payload
    int weight = 1;  // expanded multiplicity
};

class SeqStream {
  public:
    virtual ~SeqStream() = default;
    // False once exhausted. Values must come out non-increasing in h.
    virtual bool next(StreamItem& out, Counters& c) = 0;
};

// Reads streams in blocks of h, repeatedly appending the pending block with
// the highest block-minimum until the appended weight reaches k, then adds
// every still-pending block. The result is a superset of the k highest
// items; extract-max count lands in c.extract_max.
std::vector<StreamItem> block_heap_collect(const std::vector<SeqStream*>& streams, int k, int h,
                                           Counters& c);

// Block size used when nothing better is known: ceil(log2 log2 n), at least 1.
int default_block_size(size_t n);

namespace detail {

// Strided descending view into one layer's pieces, walking away from the
// located top piece. at() charges one element access.
struct DescView {
    const std::vector<Line>* lines;
    int start;
    int step;  // +1 right, -1 left, or 2*step when halved
    int len;
    double x;

    const Line& at(int j, Counters& c) const {
        ++c.element_accesses;
        return (*lines)[size_t(start + j * step)];
    }
    double val(int j, Counters& c) const { return at(j, c).eval(x); }
};

// Height of the k-th largest element (1-based, representatives) across the
// views, by repeated halving with a heap base case.
double select_kth_desc(const std::vector<DescView>& views, int k, Counters& c);

}  // namespace detail

}  // namespace uqr
