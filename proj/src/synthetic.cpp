#include "mbow/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mbow {
namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Smooth base texture: a coarse random grid upsampled bilinearly, overlaid
// with random hard-edged rectangles so FAST always has corners to find.
Image build_world(int width, int height, std::mt19937_64& rng) {
    const int cell = 6;
    const int gw = width / cell + 2;
    const int gh = height / cell + 2;
    std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
    for (double& g : grid) g = 30.0 + 170.0 * unit_double(rng);

    Image world(width, height);
    for (int v = 0; v < height; ++v) {
        const double gy = static_cast<double>(v) / cell;
        const int y0 = static_cast<int>(gy);
        const double fy = gy - y0;
        for (int u = 0; u < width; ++u) {
            const double gx = static_cast<double>(u) / cell;
            const int x0 = static_cast<int>(gx);
            const double fx = gx - x0;
            const double a = grid[static_cast<std::size_t>(y0) * gw + x0];
            const double b = grid[static_cast<std::size_t>(y0) * gw + x0 + 1];
            const double c = grid[static_cast<std::size_t>(y0 + 1) * gw + x0];
            const double d = grid[static_cast<std::size_t>(y0 + 1) * gw + x0 + 1];
            const double value = a * (1 - fx) * (1 - fy) + b * fx * (1 - fy) +
                                 c * (1 - fx) * fy + d * fx * fy;
            world.at(u, v) = static_cast<std::uint8_t>(std::lround(value));
        }
    }

    // One rectangle per ~20x20 region on average.
    const std::size_t n_rects =
        static_cast<std::size_t>(width) * height / (20 * 20);
    for (std::size_t i = 0; i < n_rects; ++i) {
        const int rw = 4 + static_cast<int>(unit_double(rng) * 11);
        const int rh = 4 + static_cast<int>(unit_double(rng) * 11);
        const int ru = static_cast<int>(unit_double(rng) * (width - rw));
        const int rv = static_cast<int>(unit_double(rng) * (height - rh));
        const std::uint8_t value = unit_double(rng) < 0.5 ? 8 : 247;
        for (int v = rv; v < rv + rh; ++v)
            for (int u = ru; u < ru + rw; ++u) world.at(u, v) = value;
    }
    return world;
}

double sample_bilinear(const Image& world, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(world.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(world.height - 1));
    const int x0 = std::min(static_cast<int>(x), world.width - 2);
    const int y0 = std::min(static_cast<int>(y), world.height - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    return world.at(x0, y0) * (1 - fx) * (1 - fy) + world.at(x0 + 1, y0) * fx * (1 - fy) +
           world.at(x0, y0 + 1) * (1 - fx) * fy + world.at(x0 + 1, y0 + 1) * fx * fy;
}

}  // namespace

SyntheticSequence generate_synthetic(const SyntheticConfig& config) {
    if (config.n_frames == 0 || config.frame_width < 64 || config.frame_height < 64 ||
        config.step <= 0 || config.warp_magnitude < 0.0)
        throw std::invalid_argument("generate_synthetic: invalid config");
    if (config.loop_start + config.revisit_len > config.n_frames)
        throw std::invalid_argument(
            "generate_synthetic: loop_start + revisit_len must not exceed n_frames");
    if (config.revisit_len > config.loop_start)
        throw std::invalid_argument(
            "generate_synthetic: revisit_len cannot exceed loop_start");

    const std::size_t after_start = config.loop_start + config.revisit_len;
    // Post-revisit frames continue in fresh territory well past everything
    // the first pass covered, so only the declared revisit sees old ground.
    const long far_gap = static_cast<long>(config.step) *
                             static_cast<long>(config.n_frames) +
                         4L * config.frame_width;
    auto offset_of = [&](std::size_t f) -> long {
        if (f < config.loop_start) return static_cast<long>(config.step) * static_cast<long>(f);
        if (f < after_start)
            return static_cast<long>(config.step) *
                   static_cast<long>(f - config.loop_start);
        return far_gap + static_cast<long>(config.step) *
                             static_cast<long>(f - after_start);
    };

    long max_offset = 0;
    for (std::size_t f = 0; f < config.n_frames; ++f)
        max_offset = std::max(max_offset, offset_of(f));
    const int world_width = static_cast<int>(max_offset) + config.frame_width +
                            2 * static_cast<int>(std::ceil(config.warp_magnitude)) + 4;

    std::mt19937_64 rng(config.seed);
    const Image world = build_world(world_width, config.frame_height, rng);

    const double warp = config.warp_magnitude;
    const int noise_amp = static_cast<int>(std::lround(std::min(2.0, warp)));

    SyntheticSequence out;
    out.frames.reserve(config.n_frames);
    for (std::size_t f = 0; f < config.n_frames; ++f) {
        const long off = offset_of(f);
        Image frame(config.frame_width, config.frame_height);

        if (warp == 0.0) {
            for (int v = 0; v < config.frame_height; ++v)
                for (int u = 0; u < config.frame_width; ++u)
                    frame.at(u, v) = world.at(static_cast<int>(off) + u, v);
        } else {
            // Translation plus a small affine term; each contributes at most
            // warp/2 px of displacement anywhere in the frame.
            const double dx = warp * (unit_double(rng) - 0.5);
            const double dy = warp * (unit_double(rng) - 0.5);
            const double cu = config.frame_width / 2.0;
            const double cv = config.frame_height / 2.0;
            const double norm = std::max(cu, cv);
            const double axx = warp * (unit_double(rng) - 0.5) / (2.0 * norm);
            const double axy = warp * (unit_double(rng) - 0.5) / (2.0 * norm);
            const double ayx = warp * (unit_double(rng) - 0.5) / (2.0 * norm);
            const double ayy = warp * (unit_double(rng) - 0.5) / (2.0 * norm);
            for (int v = 0; v < config.frame_height; ++v) {
                for (int u = 0; u < config.frame_width; ++u) {
                    const double ru = u - cu;
                    const double rv = v - cv;
                    const double sx = off + u + dx + axx * ru + axy * rv;
                    const double sy = v + dy + ayx * ru + ayy * rv;
                    int value = static_cast<int>(std::lround(sample_bilinear(world, sx, sy)));
                    if (noise_amp > 0)
                        value += static_cast<int>(
                                     unit_double(rng) * (2 * noise_amp + 1)) -
                                 noise_amp;
                    frame.at(u, v) = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
                }
            }
        }
        out.frames.push_back(std::move(frame));
    }

    for (std::size_t j = 0; j < config.revisit_len; ++j) {
        const auto query = static_cast<std::uint32_t>(config.loop_start + j);
        for (int delta = -1; delta <= 1; ++delta) {
            const long m = static_cast<long>(j) + delta;
            if (m < 0 || m >= static_cast<long>(config.loop_start)) continue;
            out.gt.valid_pairs.insert({query, static_cast<std::uint32_t>(m)});
        }
    }
    return out;
}

}  // namespace mbow
