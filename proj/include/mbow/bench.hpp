#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mbow/patch.hpp"
#include "mbow/test_pattern.hpp"

namespace mbow {

struct TimingStats {
    double mean_us = 0.0;
    double stddev_us = 0.0;
    double min_us = 0.0;
    double max_us = 0.0;
    std::size_t samples = 0;
};

/// Times the full codeword-learning path (mean patch, binary tests, mask)
/// per trial, wall clock. Sources are smoothed patch pairs; the seeded
/// overload synthesizes them. Requires at least 100 trials.
TimingStats bench_codeword_learning(std::size_t n_trials,
                                    std::span<const std::pair<Patch, Patch>> sources,
                                    const TestPattern& pattern);
TimingStats bench_codeword_learning(std::size_t n_trials, std::uint64_t seed,
                                    const TestPattern& pattern);

/// Median per-trial time of the O(L) part only (tests plus mask on a fixed
/// mean patch), for scaling comparisons across bit counts.
double median_tests_mask_us(std::size_t n_trials, std::uint64_t seed,
                            const TestPattern& pattern);

/// Random smoothed patch pairs for benchmarks and property tests.
std::vector<std::pair<Patch, Patch>> random_patch_pairs(std::size_t count,
                                                        std::uint64_t seed, int size);

}  // namespace mbow
