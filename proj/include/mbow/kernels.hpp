#pragma once

#include <cstddef>
#include <cstdint>

// Word-level bit kernels behind the BitVector type. Every kernel exists as a
// scalar reference implementation plus optional SIMD variants (AVX2 on x86-64,
// NEON on aarch64) selected once at startup. All operands are arrays of `n`
// 64-bit words; destination may alias either source.

namespace mbow::kernels {

struct Ops {
    void (*xor_words)(std::uint64_t* dst, const std::uint64_t* a,
                      const std::uint64_t* b, std::size_t n);
    void (*and_words)(std::uint64_t* dst, const std::uint64_t* a,
                      const std::uint64_t* b, std::size_t n);
    void (*or_words)(std::uint64_t* dst, const std::uint64_t* a,
                     const std::uint64_t* b, std::size_t n);
    void (*not_words)(std::uint64_t* dst, const std::uint64_t* a, std::size_t n);

    std::uint64_t (*popcount_words)(const std::uint64_t* a, std::size_t n);

    // popcount(a ^ b): the Hamming distance on packed words.
    std::uint64_t (*popcount_xor)(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n);

    // popcount((a ^ b) & m): the directed masked distance.
    std::uint64_t (*popcount_xor_and)(const std::uint64_t* a,
                                      const std::uint64_t* b,
                                      const std::uint64_t* m, std::size_t n);

    // Both directed distances of a codeword pair in one pass over x1 ^ x2.
    void (*masked_pair)(const std::uint64_t* x1, const std::uint64_t* x2,
                        const std::uint64_t* y1, const std::uint64_t* y2,
                        std::size_t n, std::uint64_t* d12, std::uint64_t* d21);

    // Same as masked_pair but abandons once the running popcount of
    // (x1 ^ x2) & y1 & y2 exceeds q_limit. That count lower-bounds both
    // directed distances, hence the full masked Hamming distance, so an
    // abandoned scan certifies the pair is beyond the caller's threshold.
    // Returns true when the scan completed and d12/d21 are valid.
    bool (*masked_pair_abandon)(const std::uint64_t* x1, const std::uint64_t* x2,
                                const std::uint64_t* y1, const std::uint64_t* y2,
                                std::size_t n, std::uint64_t q_limit,
                                std::uint64_t* d12, std::uint64_t* d21);

    const char* name;
};

const Ops& scalar_ops();

// Null when the backend is not compiled in or the CPU lacks the feature.
const Ops* avx2_ops();
const Ops* neon_ops();

// Backend picked at first use: MBOW_KERNELS=scalar|avx2|neon overrides,
// otherwise the widest available variant wins.
const Ops& active();

}  // namespace mbow::kernels
