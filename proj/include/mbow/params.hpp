#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace mbow {

/// Detection-run parameters. The first block are the tuned knobs (defaults
/// are the best precision/recall set); the second block is pipeline plumbing
/// with fixed, documented conventions.
struct DetectionParams {
    double psi = 18.0;            ///< masked-Hamming matching threshold (inclusive)
    int upsilon = 35;             ///< keypoint detection threshold
    std::size_t gamma = 100;      ///< max matched pairs kept per frame
    std::size_t bits = 512;       ///< descriptor/mask length L
    int t_local = 20;             ///< recent frames excluded from retrieval
    double accept_likelihood = 0.3;
    int k_consistency = 2;        ///< 0 disables the consistency check

    std::uint64_t pattern_seed = 42;
    int patch_size = 48;
    int search_radius = 50;           ///< local-search window half-width, px
    double raw_match_fraction = 0.25; ///< raw Hamming gate = fraction * bits
    bool use_temporal_filter = true;
    std::optional<std::array<int, 4>> roi;  ///< u0, v0, u1, v1 (inclusive)

    std::uint32_t raw_match_threshold() const {
        return static_cast<std::uint32_t>(raw_match_fraction * static_cast<double>(bits));
    }
};

}  // namespace mbow
