#include "mbow/kernels.hpp"

#include <bit>

namespace mbow::kernels {
namespace {

void xor_scalar(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] ^ b[i];
}

void and_scalar(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
                std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

void or_scalar(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
               std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] | b[i];
}

void not_scalar(std::uint64_t* dst, const std::uint64_t* a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = ~a[i];
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(a[i]));
    return sum;
}

std::uint64_t popcount_xor_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
    return sum;
}

std::uint64_t popcount_xor_and_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                      const std::uint64_t* m, std::size_t n) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += static_cast<std::uint64_t>(std::popcount((a[i] ^ b[i]) & m[i]));
    return sum;
}

void masked_pair_scalar(const std::uint64_t* x1, const std::uint64_t* x2,
                        const std::uint64_t* y1, const std::uint64_t* y2,
                        std::size_t n, std::uint64_t* d12, std::uint64_t* d21) {
    std::uint64_t s12 = 0, s21 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t z = x1[i] ^ x2[i];
        s12 += static_cast<std::uint64_t>(std::popcount(z & y1[i]));
        s21 += static_cast<std::uint64_t>(std::popcount(z & y2[i]));
    }
    *d12 = s12;
    *d21 = s21;
}

bool masked_pair_abandon_scalar(const std::uint64_t* x1, const std::uint64_t* x2,
                                const std::uint64_t* y1, const std::uint64_t* y2,
                                std::size_t n, std::uint64_t q_limit,
                                std::uint64_t* d12, std::uint64_t* d21) {
    std::uint64_t s12 = 0, s21 = 0, q = 0;
    for (std::size_t i = 0; i < n; ++i) {
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

const Ops& scalar_ops() {
    static const Ops ops = {
        xor_scalar,          and_scalar,
        or_scalar,           not_scalar,
        popcount_scalar,     popcount_xor_scalar,
        popcount_xor_and_scalar, masked_pair_scalar,
        masked_pair_abandon_scalar, "scalar",
    };
    return ops;
}

}  // namespace mbow::kernels
