#include "mbow/codeword.hpp"

#include <algorithm>
#include <stdexcept>

#include "mbow/kernels.hpp"

namespace mbow {
namespace {

void require_same_length(const Codeword& a, const Codeword& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("Codeword length mismatch");
}

void require_nonzero_masks(const Codeword& a, const Codeword& b) {
    if (a.mask.cardinality() == 0 || b.mask.cardinality() == 0)
        throw std::invalid_argument(
            "masked Hamming distance requires non-zero masks on both codewords");
}

}  // namespace

std::uint64_t directed_masked_distance(const Codeword& di, const Codeword& dj) {
    require_same_length(di, dj);
    return kernels::active().popcount_xor_and(di.bits.words().data(),
                                              dj.bits.words().data(),
                                              di.mask.words().data(),
                                              di.bits.word_count());
}

double masked_hamming(const Codeword& d1, const Codeword& d2) {
    require_same_length(d1, d2);
    require_nonzero_masks(d1, d2);
    std::uint64_t d12 = 0, d21 = 0;
    kernels::active().masked_pair(d1.bits.words().data(), d2.bits.words().data(),
                                  d1.mask.words().data(), d2.mask.words().data(),
                                  d1.bits.word_count(), &d12, &d21);
    const std::uint64_t c1 = d1.mask.cardinality();
    const std::uint64_t c2 = d2.mask.cardinality();
    return static_cast<double>(c2 * d12 + c1 * d21) / static_cast<double>(c1 + c2);
}

bool masked_within(const Codeword& d1, const Codeword& d2, double threshold) {
    require_same_length(d1, d2);
    require_nonzero_masks(d1, d2);
    std::uint64_t d12 = 0, d21 = 0;
    kernels::active().masked_pair(d1.bits.words().data(), d2.bits.words().data(),
                                  d1.mask.words().data(), d2.mask.words().data(),
                                  d1.bits.word_count(), &d12, &d21);
    const std::uint64_t c1 = d1.mask.cardinality();
    const std::uint64_t c2 = d2.mask.cardinality();
    // Counts stay far below 2^53, so the products are exact in double.
    return static_cast<double>(c2 * d12 + c1 * d21) <=
           threshold * static_cast<double>(c1 + c2);
}

Codeword learn_codeword(const Patch& a, const Patch& b, const TestPattern& pattern) {
    return learn_codeword(a, b, pattern, binary_tests(a, pattern),
                          binary_tests(b, pattern));
}

Codeword learn_codeword(const Patch& a, const Patch& b, const TestPattern& pattern,
                        const BitVector& xa, const BitVector& xb) {
    const Patch mean = mean_patch(a, b);
    return Codeword{binary_tests(mean, pattern), mask_from_descriptors(xa, xb)};
}

Codeword learn_codeword_three_patch(const Patch& a, const Patch& b,
                                    const TestPattern& pattern) {
    const Patch mean = mean_patch(a, b);
    const BitVector xa = binary_tests(a, pattern);
    const BitVector xb = binary_tests(b, pattern);
    const BitVector xm = binary_tests(mean, pattern);
    BitVector mask(pattern.bits());
    for (std::size_t i = 0; i < pattern.bits(); ++i) {
        const bool ta = xa.bit(i), tb = xb.bit(i), tm = xm.bit(i);
        if ((ta && tb && tm) || (!ta && !tb && !tm)) mask.set_bit(i, true);
    }
    return Codeword{xm, mask};
}

BitVector mask_from_descriptors(const BitVector& x1, const BitVector& x2) {
    return bit_not(bit_xor(x1, x2));
}

std::optional<Codeword> merge_codewords(const Codeword& d1, const Codeword& d2,
                                        std::uint64_t w1, std::uint64_t w2) {
    require_same_length(d1, d2);
    const BitVector agree = mask_from_descriptors(d1.bits, d2.bits);
    BitVector mask = bit_and(bit_and(d1.mask, d2.mask), agree);
    if (mask.cardinality() == 0) return std::nullopt;

    // Common bits survive; disagreements go to the heavier input, d1 on ties.
    const Codeword& winner = (w2 > w1) ? d2 : d1;
    BitVector bits = bit_or(bit_and(d1.bits, agree), bit_and(winner.bits, bit_not(agree)));
    return Codeword{std::move(bits), std::move(mask)};
}

double lambda_bound(const Codeword& dm, const Codeword& dk, std::size_t length) {
    const std::uint64_t cm = dm.mask.cardinality();
    const std::uint64_t ck = dk.mask.cardinality();
    if (cm == 0 || ck == 0)
        throw std::invalid_argument("lambda_bound requires non-zero masks");
    const double l = static_cast<double>(length);
    const double ratio = static_cast<double>(std::min(cm, ck)) /
                         static_cast<double>(std::max(cm, ck));
    return (static_cast<double>(ck) / (l + static_cast<double>(ck))) * (1.0 + ratio);
}

Codeword parse_codeword(std::string_view x_line, std::string_view y_line) {
    Codeword d{BitVector::from_string(x_line), BitVector::from_string(y_line)};
    if (d.bits.length() != d.mask.length())
        throw std::invalid_argument("codeword fixture: descriptor and mask lengths differ");
    return d;
}

}  // namespace mbow
