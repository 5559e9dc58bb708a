#include "mbow/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <bit>
#include <immintrin.h>

namespace mbow::kernels {
namespace {

// Nibble-LUT popcount: per-byte counts via vpshufb, folded to four u64 lanes
// with vpsadbw.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lookup =
        _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::uint64_t hsum_epi64(__m256i v) {
    const __m128i lo = _mm256_castsi256_si128(v);
    const __m128i hi = _mm256_extracti128_si256(v, 1);
    const __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<std::uint64_t>(_mm_extract_epi64(s, 0)) +
           static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

inline __m256i load(const std::uint64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store(std::uint64_t* p, __m256i v) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

void xor_avx2(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) store(dst + i, _mm256_xor_si256(load(a + i), load(b + i)));
    for (; i < n; ++i) dst[i] = a[i] ^ b[i];
}

void and_avx2(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) store(dst + i, _mm256_and_si256(load(a + i), load(b + i)));
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void or_avx2(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
             std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) store(dst + i, _mm256_or_si256(load(a + i), load(b + i)));
    for (; i < n; ++i) dst[i] = a[i] | b[i];
}

void not_avx2(std::uint64_t* dst, const std::uint64_t* a, std::size_t n) {
    const __m256i ones = _mm256_set1_epi64x(-1);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) store(dst + i, _mm256_xor_si256(load(a + i), ones));
    for (; i < n; ++i) dst[i] = ~a[i];
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcount_epi64(load(a + i)));
    std::uint64_t sum = hsum_epi64(acc);
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(a[i]));
    return sum;
}

std::uint64_t popcount_xor_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_xor_si256(load(a + i), load(b + i))));
    std::uint64_t sum = hsum_epi64(acc);
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
    return sum;
}

std::uint64_t popcount_xor_and_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                    const std::uint64_t* m, std::size_t n) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i z = _mm256_and_si256(_mm256_xor_si256(load(a + i), load(b + i)),
                                           load(m + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(z));
    }
    std::uint64_t sum = hsum_epi64(acc);
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount((a[i] ^ b[i]) & m[i]));
    return sum;
}

void masked_pair_avx2(const std::uint64_t* x1, const std::uint64_t* x2,
                      const std::uint64_t* y1, const std::uint64_t* y2,
                      std::size_t n, std::uint64_t* d12, std::uint64_t* d21) {
    __m256i acc12 = _mm256_setzero_si256();
    __m256i acc21 = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i z = _mm256_xor_si256(load(x1 + i), load(x2 + i));
        acc12 = _mm256_add_epi64(acc12, popcount_epi64(_mm256_and_si256(z, load(y1 + i))));
        acc21 = _mm256_add_epi64(acc21, popcount_epi64(_mm256_and_si256(z, load(y2 + i))));
    }
    std::uint64_t s12 = hsum_epi64(acc12);
    std::uint64_t s21 = hsum_epi64(acc21);
    for (; i < n; ++i) {
        const std::uint64_t z = x1[i] ^ x2[i];
        s12 += static_cast<std::uint64_t>(std::popcount(z & y1[i]));
        s21 += static_cast<std::uint64_t>(std::popcount(z & y2[i]));
    }
    *d12 = s12;
    *d21 = s21;
}

bool masked_pair_abandon_avx2(const std::uint64_t* x1, const std::uint64_t* x2,
                              const std::uint64_t* y1, const std::uint64_t* y2,
                              std::size_t n, std::uint64_t q_limit,
                              std::uint64_t* d12, std::uint64_t* d21) {
    __m256i acc12 = _mm256_setzero_si256();
    __m256i acc21 = _mm256_setzero_si256();
    std::uint64_t q = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i z = _mm256_xor_si256(load(x1 + i), load(x2 + i));
        const __m256i z1 = _mm256_and_si256(z, load(y1 + i));
        const __m256i z2 = _mm256_and_si256(z, load(y2 + i));
        acc12 = _mm256_add_epi64(acc12, popcount_epi64(z1));
        acc21 = _mm256_add_epi64(acc21, popcount_epi64(z2));
        q += hsum_epi64(popcount_epi64(_mm256_and_si256(z1, load(y2 + i))));
        if (q > q_limit) return false;
    }
    std::uint64_t s12 = hsum_epi64(acc12);
    std::uint64_t s21 = hsum_epi64(acc21);
    for (; i < n; ++i) {
        const std::uint64_t z = x1[i] ^ x2[i];
        const std::uint64_t z1 = z & y1[i];
        const std::uint64_t z2 = z & y2[i];
        s12 += static_cast<std::uint64_t>(std::popcount(z1));
        s21 += static_cast<std::uint64_t>(std::popcount(z2));
        q += static_cast<std::uint64_t>(std::popcount(z1 & y2[i]));
        if (q > q_limit) return false;
    }
    *d12 = s12;
    *d21 = s21;
    return true;
}

}  // namespace

const Ops* avx2_ops() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const Ops ops = {
        xor_avx2,          and_avx2,
        or_avx2,           not_avx2,
        popcount_avx2,     popcount_xor_avx2,
        popcount_xor_and_avx2, masked_pair_avx2,
        masked_pair_abandon_avx2, "avx2",
    };
    return &ops;
}

}  // namespace mbow::kernels

#else

namespace mbow::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace mbow::kernels

#endif
