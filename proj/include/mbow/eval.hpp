#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "mbow/image.hpp"
#include "mbow/params.hpp"
#include "mbow/pipeline.hpp"
#include "mbow/test_pattern.hpp"

namespace mbow {

/// Valid (query_frame, match_frame) pairs; any frame tolerance is encoded in
/// the pair set itself. match precedes query in every pair.
struct GroundTruth {
    std::set<std::pair<std::uint32_t, std::uint32_t>> valid_pairs;

    bool valid(std::uint32_t query, std::uint32_t match) const {
        return valid_pairs.count({query, match}) > 0;
    }
    std::set<std::uint32_t> query_frames() const;
};

struct PRPoint {
    double psi = 0.0;
    double precision = 1.0;
    double recall = 0.0;
    std::uint64_t tp = 0, fp = 0, fn = 0;
};

/// A detection (q -> m) is a true positive iff (q, m) is a valid pair, a
/// false positive otherwise; fn counts ground-truth query frames with no
/// accepted detection at all. precision is 1.0 when nothing was accepted.
PRPoint score(std::span<const Detection> detections, const GroundTruth& gt);

/// Lazily-loaded frame sequence so dataset-scale runs never hold every image.
struct FrameSource {
    std::size_t count = 0;
    std::function<Image(std::size_t)> image;
    /// Optional detection bypass; return an empty vector to run the detector.
    std::function<std::vector<Keypoint>(std::size_t)> keypoints;
};

/// References the caller's frames; they must outlive the returned source.
FrameSource memory_source(const std::vector<Image>& frames);

/// Runs the full pipeline once over the source.
std::vector<Detection> run_pipeline(const FrameSource& source,
                                    const DetectionParams& params,
                                    const TestPattern& pattern);

/// One full pipeline run per psi value (everything else fixed), scored
/// against the ground truth.
std::vector<PRPoint> sweep(const FrameSource& source, const DetectionParams& base,
                           const TestPattern& pattern, std::span<const double> psi_list,
                           const GroundTruth& gt);

/// Best recall among points with precision == 1.0 (0.0 when there is none).
double best_recall_at_full_precision(std::span<const PRPoint> points);

/// Accepted detections (tp + fp) never decrease as psi grows. Checked
/// empirically per sweep; points must be sorted by psi.
bool sweep_monotone(std::span<const PRPoint> points);

void write_pr_csv(const std::filesystem::path& path, std::span<const PRPoint> points);

/// Manifest: one image path per line, line index = frame id. Relative paths
/// resolve against the manifest's directory.
std::vector<std::filesystem::path> load_manifest(const std::filesystem::path& path);

/// Ground-truth file: "query match" pairs, one per line, match < query.
/// Duplicates and malformed lines are rejected with their line number.
GroundTruth load_ground_truth(const std::filesystem::path& path);

FrameSource manifest_source(const std::vector<std::filesystem::path>& images);

}  // namespace mbow
