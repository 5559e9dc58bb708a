#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "mbow/bitvector.hpp"
#include "mbow/image.hpp"
#include "mbow/patch.hpp"
#include "mbow/test_pattern.hpp"

namespace mbow {

/// Inclusive rectangle in pixel coordinates.
struct Roi {
    int u0 = 0, v0 = 0, u1 = 0, v1 = 0;

    static Roi full(const Image& image) { return {0, 0, image.width - 1, image.height - 1}; }
    bool contains(int u, int v) const { return u >= u0 && u <= u1 && v >= v0 && v <= v1; }
};

struct Keypoint {
    int u = 0;
    int v = 0;
    std::int64_t score = 0;
};

/// Keypoints must stay at least this many pixels away from every image
/// border so a full patch can be extracted around them.
inline constexpr int kPatchMargin = 24;

/// FAST-9 segment test on the 16-pixel Bresenham circle of radius 3: a pixel
/// is a corner when at least 9 contiguous circle pixels are all brighter than
/// center + threshold or all darker than center - threshold. Score is the sum
/// of absolute differences over the qualifying arc; 3x3 non-maximum
/// suppression, then border/ROI filtering. Throws for images under 7x7.
std::vector<Keypoint> detect_keypoints(const Image& image, int threshold, const Roi& roi,
                                       int border_margin = kPatchMargin);

/// Detection-bypass path: keeps supplied keypoints that satisfy the ROI and
/// border rules, reporting how many were dropped.
struct IngestResult {
    std::vector<Keypoint> accepted;
    std::size_t dropped = 0;
};
IngestResult filter_keypoints(const std::vector<Keypoint>& keypoints, const Image& image,
                              const Roi& roi, int border_margin = kPatchMargin);

/// Keypoint file: one "frame_id u v" per line.
std::map<int, std::vector<Keypoint>> load_keypoint_file(const std::filesystem::path& path);

/// Raw patch_size x patch_size crop centered at the keypoint: rows
/// v-24..v+23, columns u-24..u+23 for the default size. Throws if the margin
/// is violated.
Patch extract_patch(const Image& image, const Keypoint& kp, int patch_size = 48);

/// Crop followed by the 5x5 box smoothing; this is what descriptors see.
Patch extract_smoothed_patch(const Image& image, const Keypoint& kp, int patch_size = 48);

/// One frame of a sequence with its per-keypoint smoothed patches and raw
/// descriptors.
struct Frame {
    int id = 0;
    Image image;
    std::vector<Keypoint> keypoints;
    std::vector<Patch> patches;
    std::vector<BitVector> descriptors;
};

/// Fills patches and descriptors for the frame's keypoints. Per-keypoint
/// work is pure, so callers may shard it; nothing here shares mutable state.
void compute_descriptors(Frame& frame, const TestPattern& pattern);

struct MatchPair {
    Keypoint kp_prev;
    Keypoint kp_cur;
    std::size_t prev_index = 0;
    std::size_t cur_index = 0;
    std::uint32_t distance = 0;
};

/// Cross-frame matching: for every previous-frame keypoint, candidates are
/// current-frame keypoints within a square window of the given radius; the
/// minimum raw Hamming distance wins if it passes max_distance and the match
/// is mutual-best. Output is sorted by ascending distance (prev index breaks
/// ties) and truncated to max_pairs.
std::vector<MatchPair> match_features(const Frame& prev, const Frame& cur,
                                      std::size_t max_pairs, std::uint32_t max_distance,
                                      int search_radius = 50);

}  // namespace mbow
