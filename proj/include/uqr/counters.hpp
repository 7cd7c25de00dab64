#pragma once

#include <cstdint>
#include <vector>

namespace uqr {

// Per-query instrumentation. Queries take a Counters& and only ever add to it;
// callers reset between measurements.
struct Counters {
    uint64_t comparisons = 0;       // predicate evaluations in searches/walks
    uint64_t bridge_steps = 0;      // cascade bridge advances
    uint64_t element_accesses = 0;  // sorted-stream element reads
    uint64_t heap_ops = 0;          // push/pop on candidate heaps
    uint64_t extract_max = 0;       // extract-max ops in block/doubling engines
    uint64_t full_extractions = 0;  // extract-max ops that consumed a full-size block
    uint64_t binary_searches = 0;   // catalog binary searches
    uint64_t reported = 0;          // items emitted
    uint64_t sets_visited = 0;      // canonical sets touched

    void reset() { *this = Counters{}; }

    Counters& operator+=(const Counters& o) {
        comparisons += o.comparisons;
        bridge_steps += o.bridge_steps;
        element_accesses += o.element_accesses;
        heap_ops += o.heap_ops;
        extract_max += o.extract_max;
        full_extractions += o.full_extractions;
        binary_searches += o.binary_searches;
        reported += o.reported;
        sets_visited += o.sets_visited;
        return *this;
    }
};

// One reported point.
struct Item {
    int id = -1;
    double prob = 0.0;
};

// Canonical result order: probability descending, id ascending.
inline bool item_before(const Item& a, const Item& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.id < b.id;
}

struct QueryResult {
    std::vector<Item> items;
    Counters counters;
};

// Query engine selection. auto_ resolves to each index family's default;
// asking for an engine a family does not implement is a capability error.
enum class Engine { auto_, heap, select, block };

}  // namespace uqr
