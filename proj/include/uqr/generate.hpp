#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uqr/model.hpp"

namespace uqr {

// Deterministic random instances for validation and benchmarks. Supports sit
// in a band around the origin (|x| < 200) with widths of at least 0.05, so
// queries drawn from the same band hit plenty of mass without degenerate
// slivers.
std::vector<UncertainPoint> gen_uniform_points(int n, std::uint64_t seed);
// Every point gets exactly `pieces` pieces; some interior densities are zero.
std::vector<UncertainPoint> gen_histogram_points(int n, int pieces, std::uint64_t seed);

// `rand-uniform:N` or `rand-hist:N:C`. N is a count or a doubling sweep
// `A..B` (A, 2A, 4A, ... up to B). Bad specs raise Errc::parse_error.
struct GenSpec {
    bool histogram = false;
    std::vector<int> sizes;
    int pieces = 0;  // histogram only
};

bool looks_like_gen_spec(const std::string& s);
GenSpec parse_gen_spec(const std::string& s);

inline double unit_real(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace uqr
