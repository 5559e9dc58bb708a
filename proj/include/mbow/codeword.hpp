#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "mbow/bitvector.hpp"
#include "mbow/descriptor.hpp"
#include "mbow/patch.hpp"
#include "mbow/test_pattern.hpp"

namespace mbow {

/// Vocabulary unit: a binary descriptor plus a binary mask of the same
/// length. Mask bit 1 means the coordinate participates in distance
/// computation; masked-out coordinates are the high-variance ones. A codeword
/// with an all-zero mask is representable but cannot enter a vocabulary and
/// has no defined masked Hamming distance.
struct Codeword {
    BitVector bits;  // descriptor x
    BitVector mask;  // mask y

    std::size_t length() const { return bits.length(); }
    bool operator==(const Codeword&) const = default;
};

/// Directed masked distance d(i, j) = |(x_i ^ x_j) & y_i|: disagreements
/// restricted to the *first* operand's mask. Asymmetric in general.
std::uint64_t directed_masked_distance(const Codeword& di, const Codeword& dj);

/// Masked Hamming distance:
///   ( |y2| d(1,2) + |y1| d(2,1) ) / ( |y1| + |y2| )
/// Symmetric, in [0, L], bounded by sqrt(|y1| |y2|), and equal to the plain
/// Hamming distance when both masks are all ones. Not a metric: distinct
/// codewords can be at distance 0 and the triangle inequality can fail.
/// Throws std::invalid_argument when either mask is all-zero.
double masked_hamming(const Codeword& d1, const Codeword& d2);

/// Exact threshold test: masked_hamming(d1, d2) <= threshold evaluated in
/// integer arithmetic (numerator vs threshold * denominator), avoiding the
/// rounded division.
bool masked_within(const Codeword& d1, const Codeword& d2, double threshold);

/// Learns the codeword of a matched patch pair: descriptor from the exact
/// mean patch, mask from the two source descriptors (mask bit 1 where they
/// agree). Patches must be smoothed by the caller and match the pattern's
/// patch size. The overload taking xa/xb skips recomputing the source
/// descriptors when the caller already has them.
Codeword learn_codeword(const Patch& a, const Patch& b, const TestPattern& pattern);
Codeword learn_codeword(const Patch& a, const Patch& b, const TestPattern& pattern,
                        const BitVector& xa, const BitVector& xb);

/// Verification path: evaluates the mask definition literally, keeping bit i
/// only when the test outcome agrees across all of {mean, a, b}. Must agree
/// bit-exactly with learn_codeword given exact mean arithmetic.
Codeword learn_codeword_three_patch(const Patch& a, const Patch& b,
                                    const TestPattern& pattern);

/// not(x1 ^ x2): the mask of the codeword learned from descriptors x1, x2.
BitVector mask_from_descriptors(const BitVector& x1, const BitVector& x2);

/// Merges two codewords: mask = y1 & y2 & not(x1 ^ x2); descriptor keeps the
/// common bits and takes disagreeing bits from the heavier-weighted input
/// (w1 wins ties). Returns nullopt when the merged mask would be all-zero,
/// in which case the inputs stay distinct.
std::optional<Codeword> merge_codewords(const Codeword& d1, const Codeword& d2,
                                        std::uint64_t w1, std::uint64_t w2);

/// Locality-preservation factor
///   lambda = (|y_k| / (L + |y_k|)) * (1 + min(|y_m|,|y_k|) / max(|y_m|,|y_k|))
/// guaranteed in (0, 1]. Throws when either mask is all-zero.
double lambda_bound(const Codeword& dm, const Codeword& dk, std::size_t length);

/// Fixture form: two '0'/'1' lines, descriptor first, mask second.
Codeword parse_codeword(std::string_view x_line, std::string_view y_line);

}  // namespace mbow
