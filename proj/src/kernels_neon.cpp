#include "mbow/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <bit>

namespace mbow::kernels {
namespace {

inline uint8x16_t load8(const std::uint64_t* p) {
    return vld1q_u8(reinterpret_cast<const std::uint8_t*>(p));
}

inline void store8(std::uint64_t* p, uint8x16_t v) {
    vst1q_u8(reinterpret_cast<std::uint8_t*>(p), v);
}

inline std::uint64_t popcount128(uint8x16_t v) {
    return vaddvq_u8(vcntq_u8(v));
}

void xor_neon(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store8(dst + i, veorq_u8(load8(a + i), load8(b + i)));
    for (; i < n; ++i) dst[i] = a[i] ^ b[i];
}

void and_neon(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store8(dst + i, vandq_u8(load8(a + i), load8(b + i)));
    for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void or_neon(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
             std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store8(dst + i, vorrq_u8(load8(a + i), load8(b + i)));
    for (; i < n; ++i) dst[i] = a[i] | b[i];
}

void not_neon(std::uint64_t* dst, const std::uint64_t* a, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store8(dst + i, vmvnq_u8(load8(a + i)));
    for (; i < n; ++i) dst[i] = ~a[i];
}

std::uint64_t popcount_neon(const std::uint64_t* a, std::size_t n) {
    std::uint64_t sum = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) sum += popcount128(load8(a + i));
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(a[i]));
    return sum;
}

std::uint64_t popcount_xor_neon(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t n) {
    std::uint64_t sum = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) sum += popcount128(veorq_u8(load8(a + i), load8(b + i)));
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
    return sum;
}

std::uint64_t popcount_xor_and_neon(const std::uint64_t* a, const std::uint64_t* b,
                                    const std::uint64_t* m, std::size_t n) {
    std::uint64_t sum = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        sum += popcount128(vandq_u8(veorq_u8(load8(a + i), load8(b + i)), load8(m + i)));
    for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount((a[i] ^ b[i]) & m[i]));
    return sum;
}

void masked_pair_neon(const std::uint64_t* x1, const std::uint64_t* x2,
                      const std::uint64_t* y1, const std::uint64_t* y2,
                      std::size_t n, std::uint64_t* d12, std::uint64_t* d21) {
    std::uint64_t s12 = 0, s21 = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint8x16_t z = veorq_u8(load8(x1 + i), load8(x2 + i));
        s12 += popcount128(vandq_u8(z, load8(y1 + i)));
        s21 += popcount128(vandq_u8(z, load8(y2 + i)));
    }
    for (; i < n; ++i) {
        const std::uint64_t z = x1[i] ^ x2[i];
        s12 += static_cast<std::uint64_t>(std::popcount(z & y1[i]));
        s21 += static_cast<std::uint64_t>(std::popcount(z & y2[i]));
    }
    *d12 = s12;
    *d21 = s21;
}

bool masked_pair_abandon_neon(const std::uint64_t* x1, const std::uint64_t* x2,
                              const std::uint64_t* y1, const std::uint64_t* y2,
                              std::size_t n, std::uint64_t q_limit,
                              std::uint64_t* d12, std::uint64_t* d21) {
    std::uint64_t s12 = 0, s21 = 0, q = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint8x16_t z = veorq_u8(load8(x1 + i), load8(x2 + i));
        const uint8x16_t z1 = vandq_u8(z, load8(y1 + i));
        const uint8x16_t z2 = vandq_u8(z, load8(y2 + i));
        s12 += popcount128(z1);
        s21 += popcount128(z2);
        q += popcount128(vandq_u8(z1, load8(y2 + i)));
        if (q > q_limit) return false;
    }
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

const Ops* neon_ops() {
    static const Ops ops = {
        xor_neon,          and_neon,
        or_neon,           not_neon,
        popcount_neon,     popcount_xor_neon,
        popcount_xor_and_neon, masked_pair_neon,
        masked_pair_abandon_neon, "neon",
    };
    return &ops;
}

}  // namespace mbow::kernels

#else

namespace mbow::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace mbow::kernels

#endif
