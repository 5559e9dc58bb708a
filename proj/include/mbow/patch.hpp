#pragma once

#include <cstdint>
#include <vector>

namespace mbow {

/// Square intensity grid with exact rational values: the intensity at (u, v)
/// is raw[v * width + u] / scale. Keeping a shared integer denominator lets
/// smoothing (x25) and patch averaging (x2) stay exact, so binary tests on
/// mean patches are bit-reproducible. Intensities are nonnegative.
struct Patch {
    int width = 0;
    int height = 0;
    std::int64_t scale = 1;
    std::vector<std::int64_t> raw;

    Patch() = default;
    Patch(int w, int h) : width(w), height(h), raw(static_cast<std::size_t>(w) * h, 0) {}

    std::int64_t at(int u, int v) const {
        return raw[static_cast<std::size_t>(v) * width + u];
    }
    std::int64_t& at(int u, int v) {
        return raw[static_cast<std::size_t>(v) * width + u];
    }

    /// Display/diagnostic value; comparisons always go through `at`.
    double intensity(int u, int v) const {
        return static_cast<double>(at(u, v)) / static_cast<double>(scale);
    }
};

/// Validating constructor for externally supplied values (throws on negative
/// entries or size mismatch).
Patch make_patch(int width, int height, std::vector<std::int64_t> values,
                 std::int64_t scale = 1);

/// 5x5 box filter with coordinates clamped at the borders. Output dimensions
/// are unchanged; scale is multiplied by 25 so values stay exact.
Patch smooth(const Patch& patch);

/// Exact pixel-wise mean of two patches of equal dimensions. No rounding:
/// the result keeps numerators I1 + I2 (cross-scaled when scales differ)
/// over a doubled denominator.
Patch mean_patch(const Patch& a, const Patch& b);

}  // namespace mbow
