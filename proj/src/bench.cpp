#include "mbow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mbow/codeword.hpp"

namespace mbow {
namespace {

using Clock = std::chrono::steady_clock;

double to_us(Clock::duration d) {
    return std::chrono::duration<double, std::micro>(d).count();
}

}  // namespace

std::vector<std::pair<Patch, Patch>> random_patch_pairs(std::size_t count,
                                                        std::uint64_t seed, int size) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Patch, Patch>> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Patch a(size, size), b(size, size);
        for (auto& v : a.raw) v = static_cast<std::int64_t>(rng() % 256);
        // b is a perturbed into the same scene so the pair looks matched.
        for (std::size_t k = 0; k < b.raw.size(); ++k) {
            const std::int64_t delta = static_cast<std::int64_t>(rng() % 21) - 10;
            b.raw[k] = std::clamp<std::int64_t>(a.raw[k] + delta, 0, 255);
        }
        pairs.emplace_back(smooth(a), smooth(b));
    }
    return pairs;
}

TimingStats bench_codeword_learning(std::size_t n_trials,
                                    std::span<const std::pair<Patch, Patch>> sources,
                                    const TestPattern& pattern) {
    if (n_trials < 100)
        throw std::invalid_argument("bench_codeword_learning: need at least 100 trials");
    if (sources.empty())
        throw std::invalid_argument("bench_codeword_learning: no patch sources");

    // Warm-up keeps page faults and cache fills out of the first samples.
    volatile std::size_t sink = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        const auto& [a, b] = sources[i % sources.size()];
        sink = sink + learn_codeword(a, b, pattern).mask.cardinality();
    }

    TimingStats stats;
    stats.samples = n_trials;
    double sum = 0.0, sum_sq = 0.0;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n_trials; ++i) {
        const auto& [a, b] = sources[i % sources.size()];
        const auto start = Clock::now();
        const Codeword learned = learn_codeword(a, b, pattern);
        const auto stop = Clock::now();
        sink = sink + learned.mask.cardinality();
        const double us = to_us(stop - start);
        sum += us;
        sum_sq += us * us;
        if (i == 0 || us < lo) lo = us;
        if (i == 0 || us > hi) hi = us;
    }
    (void)sink;
    const double n = static_cast<double>(n_trials);
    stats.mean_us = sum / n;
    stats.stddev_us = std::sqrt(std::max(0.0, sum_sq / n - stats.mean_us * stats.mean_us));
    stats.min_us = lo;
    stats.max_us = hi;
    return stats;
}

TimingStats bench_codeword_learning(std::size_t n_trials, std::uint64_t seed,
                                    const TestPattern& pattern) {
    const auto sources =
        random_patch_pairs(std::min<std::size_t>(n_trials, 256), seed, pattern.patch_width);
    return bench_codeword_learning(n_trials, sources, pattern);
}

double median_tests_mask_us(std::size_t n_trials, std::uint64_t seed,
                            const TestPattern& pattern) {
    const auto sources = random_patch_pairs(64, seed, pattern.patch_width);
    std::vector<Patch> means;
    std::vector<std::pair<BitVector, BitVector>> descs;
    means.reserve(sources.size());
    for (const auto& [a, b] : sources) {
        means.push_back(mean_patch(a, b));
        descs.emplace_back(binary_tests(a, pattern), binary_tests(b, pattern));
    }

    // Batch trials so one sample is well above clock resolution.
    constexpr std::size_t kBatch = 64;
    const std::size_t n_samples = std::max<std::size_t>(9, n_trials / kBatch);
    std::vector<double> samples;
    samples.reserve(n_samples);
    volatile std::size_t sink = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const auto start = Clock::now();
        for (std::size_t i = 0; i < kBatch; ++i) {
            const std::size_t k = (s * kBatch + i) % sources.size();
            const BitVector bits = binary_tests(means[k], pattern);
            const BitVector mask = mask_from_descriptors(descs[k].first, descs[k].second);
            sink = sink + bits.cardinality() + mask.cardinality();
        }
        const auto stop = Clock::now();
        samples.push_back(to_us(stop - start) / static_cast<double>(kBatch));
    }
    (void)sink;
    std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
    return samples[samples.size() / 2];
}

}  // namespace mbow
