#include "mbow/descriptor.hpp"

#include <stdexcept>
#include <string>

namespace mbow {

BitVector binary_tests(const Patch& patch, const TestPattern& pattern) {
    if (patch.width != pattern.patch_width || patch.height != pattern.patch_height)
        throw std::invalid_argument("binary_tests: patch " + std::to_string(patch.width) +
                                    "x" + std::to_string(patch.height) +
                                    " does not match pattern patch size");
    BitVector bits(pattern.bits());
    for (std::size_t i = 0; i < pattern.pairs.size(); ++i) {
        const TestPair& p = pattern.pairs[i];
        if (patch.at(p.au, p.av) < patch.at(p.bu, p.bv)) bits.set_bit(i, true);
    }
    return bits;
}

double expected_intra_class_distance(std::span<const BitVector> descriptors) {
    if (descriptors.empty())
        throw std::invalid_argument("expected_intra_class_distance: empty descriptor set");
    const std::size_t length = descriptors.front().length();
    for (const BitVector& d : descriptors)
        if (d.length() != length)
            throw std::invalid_argument("expected_intra_class_distance: length mismatch");

    const double k = static_cast<double>(descriptors.size());
    double sum = 0.0;
    for (std::size_t l = 0; l < length; ++l) {
        std::size_t set = 0;
        for (const BitVector& d : descriptors) set += d.bit(l) ? 1 : 0;
        // Binary coordinates: E[x^2] == E[x] == p.
        const double p = static_cast<double>(set) / k;
        sum += 2.0 * p - 2.0 * p * p;
    }
    return sum / static_cast<double>(length);
}

}  // namespace mbow
