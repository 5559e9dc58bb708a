#pragma once

#include <span>

#include "mbow/bitvector.hpp"
#include "mbow/patch.hpp"
#include "mbow/test_pattern.hpp"

namespace mbow {

/// Bit i is 1 iff I(a_i) < I(b_i) strictly; ties give 0. The patch is
/// expected to be smoothed already. Throws if dimensions disagree with the
/// pattern.
BitVector binary_tests(const Patch& patch, const TestPattern& pattern);

/// Expected intra-class Hamming distance of a descriptor set, closed form:
/// (1/L) * sum_l (2 E[x_l^2] - 2 E[x_l]^2) with expectations over the set.
/// Equals the K^2-normalized double sum of pairwise per-bit squared
/// differences, diagonal included. Throws on an empty set.
double expected_intra_class_distance(std::span<const BitVector> descriptors);

}  // namespace mbow
