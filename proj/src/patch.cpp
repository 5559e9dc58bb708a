#include "mbow/patch.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mbow {

Patch make_patch(int width, int height, std::vector<std::int64_t> values,
                 std::int64_t scale) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("Patch dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("Patch value count does not match dimensions");
    if (scale <= 0) throw std::invalid_argument("Patch scale must be positive");
    for (const std::int64_t v : values)
        if (v < 0) throw std::invalid_argument("Patch intensities must be nonnegative");
    Patch p(width, height);
    p.raw = std::move(values);
    p.scale = scale;
    return p;
}

Patch smooth(const Patch& patch) {
    const int w = patch.width;
    const int h = patch.height;
    auto clamp_u = [w](int u) { return std::clamp(u, 0, w - 1); };
    auto clamp_v = [h](int v) { return std::clamp(v, 0, h - 1); };

    // Clamping is independent per axis, so the box filter separates exactly.
    Patch rows(w, h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) {
            std::int64_t sum = 0;
            for (int du = -2; du <= 2; ++du) sum += patch.at(clamp_u(u + du), v);
            rows.at(u, v) = sum;
        }

    Patch out(w, h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) {
            std::int64_t sum = 0;
            for (int dv = -2; dv <= 2; ++dv) sum += rows.at(u, clamp_v(v + dv));
            out.at(u, v) = sum;
        }
    out.scale = patch.scale * 25;
    return out;
}

Patch mean_patch(const Patch& a, const Patch& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("mean_patch: dimension mismatch " +
                                    std::to_string(a.width) + "x" + std::to_string(a.height) +
                                    " vs " + std::to_string(b.width) + "x" +
                                    std::to_string(b.height));
    Patch out(a.width, a.height);
    if (a.scale == b.scale) {
        for (std::size_t i = 0; i < out.raw.size(); ++i) out.raw[i] = a.raw[i] + b.raw[i];
        out.scale = 2 * a.scale;
    } else {
        for (std::size_t i = 0; i < out.raw.size(); ++i)
            out.raw[i] = a.raw[i] * b.scale + b.raw[i] * a.scale;
        out.scale = 2 * a.scale * b.scale;
    }
    return out;
}

}  // namespace mbow
