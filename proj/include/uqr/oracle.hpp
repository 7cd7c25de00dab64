#pragma once

#include <vector>

#include "uqr/counters.hpp"
#include "uqr/model.hpp"

namespace uqr {

// Reference answers by direct evaluation of every point. Deliberately
// independent of the index machinery: model evaluation, std::sort, nothing
// else. All lists come back ordered (prob desc, id asc).

std::vector<Item> brute_all(const std::vector<UncertainPoint>& pts, const QueryInterval& I);
Item brute_top1(const std::vector<UncertainPoint>& pts, const QueryInterval& I);
std::vector<Item> brute_topk(const std::vector<UncertainPoint>& pts, const QueryInterval& I, int k);
std::vector<Item> brute_threshold(const std::vector<UncertainPoint>& pts, const QueryInterval& I,
                                  double tau);

void require_k(int k, size_t n);
void require_tau(double tau);

// Tie-aware validation of index answers against the oracle.
//
// top1: reported probability within tol of the best, and internally
// consistent with the model for the reported id.
bool top1_matches(const Item& got, const std::vector<UncertainPoint>& pts,
                  const QueryInterval& I, double tol = 1e-9);

// topk: probabilities match the oracle's top k elementwise (sorted order);
// ids match exactly above the cut probability; entries at the cut must be
// distinct members of the oracle's tie population.
bool topk_matches(const std::vector<Item>& got, const std::vector<UncertainPoint>& pts,
                  const QueryInterval& I, int k, double tol = 1e-9);

// threshold: exact id set, canonical order, model-exact probabilities.
bool threshold_matches(const std::vector<Item>& got, const std::vector<UncertainPoint>& pts,
                       const QueryInterval& I, double tau);

}  // namespace uqr
