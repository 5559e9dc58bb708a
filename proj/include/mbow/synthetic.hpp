#pragma once

#include <cstdint>
#include <vector>

#include "mbow/eval.hpp"
#include "mbow/image.hpp"

namespace mbow {

/// Planted-loop sequence layout: frames slide a window along a seeded world
/// texture; frames [loop_start, loop_start + revisit_len) re-traverse the
/// windows of frames [0, revisit_len), and later frames jump to fresh
/// territory so only the declared revisit block sees old ground. Each frame
/// gets an affine perturbation and additive noise bounded by warp_magnitude
/// (both vanish when warp_magnitude is 0, making revisits pixel-identical).
struct SyntheticConfig {
    std::size_t n_frames = 200;
    std::size_t loop_start = 150;
    std::size_t revisit_len = 30;
    double warp_magnitude = 0.0;  // pixels
    std::uint64_t seed = 1;

    int frame_width = 160;
    int frame_height = 120;
    /// Window advance per frame. Must stay below the matcher's search
    /// radius; large enough that features cross the frame in a few steps,
    /// which keeps vote mass concentrated the way real footage does.
    int step = 48;
};

struct SyntheticSequence {
    std::vector<Image> frames;
    GroundTruth gt;  ///< each revisit frame paired with its counterpart +-1
};

SyntheticSequence generate_synthetic(const SyntheticConfig& config);

}  // namespace mbow
