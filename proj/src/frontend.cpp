#include "mbow/frontend.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mbow/descriptor.hpp"

namespace mbow {
namespace {

// 16-pixel Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr int kCircle[16][2] = {
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0},  {3, 1},  {2, 2},  {1, 3},
    {0, 3},  {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3},
};

constexpr int kArc = 9;

// Segment test at one pixel. Returns the SAD score of the best qualifying
// contiguous arc, or 0 when the pixel is not a corner.
std::int64_t fast_score(const Image& img, int u, int v, int threshold) {
    const int center = img.at(u, v);
    int state[16];       // +1 brighter, -1 darker, 0 neither
    std::int64_t diff[16];
    for (int i = 0; i < 16; ++i) {
        const int p = img.at(u + kCircle[i][0], v + kCircle[i][1]);
        if (p > center + threshold)
            state[i] = 1;
        else if (p < center - threshold)
            state[i] = -1;
        else
            state[i] = 0;
        diff[i] = std::abs(p - center);
    }

    std::int64_t best = 0;
    for (int polarity : {1, -1}) {
        // Walk maximal runs on the doubled (wrapped) circle.
        int i = 0;
        while (i < 16) {
            if (state[i] != polarity) {
                ++i;
                continue;
            }
            int len = 0;
            std::int64_t sad = 0;
            int j = i;
            while (len < 16 && state[j % 16] == polarity) {
                sad += diff[j % 16];
                ++len;
                ++j;
            }
            if (len >= kArc) best = std::max(best, sad);
            i += len;  // skip the whole run (wrapped part revisited harmlessly)
        }
        // A run crossing the wrap point starting before index 0 is covered by
        // starting the walk at its first in-range index, since the scan above
        // continues across the boundary via j % 16.
    }
    return best;
}

}  // namespace

std::vector<Keypoint> detect_keypoints(const Image& image, int threshold, const Roi& roi,
                                       int border_margin) {
    if (image.width < 7 || image.height < 7)
        throw std::invalid_argument("detect_keypoints: image must be at least 7x7");

    const int w = image.width;
    const int h = image.height;
    std::vector<std::int64_t> score(static_cast<std::size_t>(w) * h, 0);

    for (int v = 3; v < h - 3; ++v)
        for (int u = 3; u < w - 3; ++u)
            score[static_cast<std::size_t>(v) * w + u] = fast_score(image, u, v, threshold);

    std::vector<Keypoint> out;
    for (int v = 3; v < h - 3; ++v) {
        for (int u = 3; u < w - 3; ++u) {
            const std::int64_t s = score[static_cast<std::size_t>(v) * w + u];
            if (s <= 0) continue;

            // 3x3 non-maximum suppression; raster order breaks score ties.
            bool maximal = true;
            for (int dv = -1; dv <= 1 && maximal; ++dv) {
                for (int du = -1; du <= 1; ++du) {
                    if (du == 0 && dv == 0) continue;
                    const std::int64_t n =
                        score[static_cast<std::size_t>(v + dv) * w + (u + du)];
                    if (n > s || (n == s && (dv < 0 || (dv == 0 && du < 0)))) {
                        maximal = false;
                        break;
                    }
                }
            }
            if (!maximal) continue;
            if (u < border_margin || v < border_margin || u >= w - border_margin ||
                v >= h - border_margin)
                continue;
            if (!roi.contains(u, v)) continue;
            out.push_back({u, v, s});
        }
    }
    return out;
}

IngestResult filter_keypoints(const std::vector<Keypoint>& keypoints, const Image& image,
                              const Roi& roi, int border_margin) {
    IngestResult result;
    for (const Keypoint& kp : keypoints) {
        const bool in_border = kp.u >= border_margin && kp.v >= border_margin &&
                               kp.u < image.width - border_margin &&
                               kp.v < image.height - border_margin;
        if (in_border && roi.contains(kp.u, kp.v))
            result.accepted.push_back(kp);
        else
            ++result.dropped;
    }
    return result;
}

std::map<int, std::vector<Keypoint>> load_keypoint_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open keypoint file: " + path.string());
    std::map<int, std::vector<Keypoint>> by_frame;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        int frame_id, u, v;
        if (!(row >> frame_id >> u >> v) || frame_id < 0)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected \"frame_id u v\"");
        by_frame[frame_id].push_back({u, v, 0});
    }
    return by_frame;
}

Patch extract_patch(const Image& image, const Keypoint& kp, int patch_size) {
    const int half = patch_size / 2;
    const int u0 = kp.u - half;
    const int v0 = kp.v - half;
    if (u0 < 0 || v0 < 0 || u0 + patch_size > image.width || v0 + patch_size > image.height)
        throw std::invalid_argument("extract_patch: keypoint violates the patch margin");
    Patch patch(patch_size, patch_size);
    for (int v = 0; v < patch_size; ++v)
        for (int u = 0; u < patch_size; ++u)
            patch.at(u, v) = image.at(u0 + u, v0 + v);
    return patch;
}

Patch extract_smoothed_patch(const Image& image, const Keypoint& kp, int patch_size) {
    return smooth(extract_patch(image, kp, patch_size));
}

void compute_descriptors(Frame& frame, const TestPattern& pattern) {
    frame.patches.clear();
    frame.descriptors.clear();
    frame.patches.reserve(frame.keypoints.size());
    frame.descriptors.reserve(frame.keypoints.size());
    for (const Keypoint& kp : frame.keypoints) {
        frame.patches.push_back(
            extract_smoothed_patch(frame.image, kp, pattern.patch_width));
        frame.descriptors.push_back(binary_tests(frame.patches.back(), pattern));
    }
}

std::vector<MatchPair> match_features(const Frame& prev, const Frame& cur,
                                      std::size_t max_pairs, std::uint32_t max_distance,
                                      int search_radius) {
    const std::size_t np = prev.keypoints.size();
    const std::size_t nc = cur.keypoints.size();
    if (prev.descriptors.size() != np || cur.descriptors.size() != nc)
        throw std::invalid_argument("match_features: frames lack descriptors");

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    auto in_window = [search_radius](const Keypoint& a, const Keypoint& b) {
        return std::abs(a.u - b.u) <= search_radius && std::abs(a.v - b.v) <= search_radius;
    };

    // Best current-frame candidate for every previous keypoint and vice
    // versa; lower index wins distance ties for determinism.
    std::vector<std::size_t> best_for_prev(np, kNone);
    std::vector<std::uint32_t> best_dist_prev(np, std::numeric_limits<std::uint32_t>::max());
    std::vector<std::size_t> best_for_cur(nc, kNone);
    std::vector<std::uint32_t> best_dist_cur(nc, std::numeric_limits<std::uint32_t>::max());

    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t c = 0; c < nc; ++c) {
            if (!in_window(prev.keypoints[p], cur.keypoints[c])) continue;
            const auto d = static_cast<std::uint32_t>(
                hamming(prev.descriptors[p], cur.descriptors[c]));
            if (d < best_dist_prev[p]) {
                best_dist_prev[p] = d;
                best_for_prev[p] = c;
            }
            if (d < best_dist_cur[c]) {
                best_dist_cur[c] = d;
                best_for_cur[c] = p;
            }
        }
    }

    std::vector<MatchPair> pairs;
    for (std::size_t p = 0; p < np; ++p) {
        const std::size_t c = best_for_prev[p];
        if (c == kNone) continue;
        if (best_dist_prev[p] > max_distance) continue;
        if (best_for_cur[c] != p) continue;  // mutual-best only
        pairs.push_back({prev.keypoints[p], cur.keypoints[c], p, c, best_dist_prev[p]});
    }

    std::sort(pairs.begin(), pairs.end(), [](const MatchPair& a, const MatchPair& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.prev_index < b.prev_index;
    });
    if (pairs.size() > max_pairs) pairs.resize(max_pairs);
    return pairs;
}

}  // namespace mbow
