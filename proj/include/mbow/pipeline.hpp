#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mbow/frontend.hpp"
#include "mbow/params.hpp"
#include "mbow/vocabulary.hpp"

namespace mbow {

/// Per-frame outcome. An absent matched_frame_id means no loop closure; when
/// present it is at least t_local frames older than the query.
struct Detection {
    std::uint32_t query_frame_id = 0;
    std::optional<std::uint32_t> matched_frame_id;
    double likelihood = 0.0;
};

/// Keeps hypothesis k only when frame k-1 or k+1 is also hypothesized, then
/// renormalizes survivors to sum to 1. Single pass over the sorted id list;
/// an all-rejected input yields an empty list.
std::vector<Hypothesis> temporal_filter(std::vector<Hypothesis> hypotheses);

/// True iff each of the previous k query frames has a candidate whose match
/// lies within +-2 frames of the linear continuation of the candidate match
/// (expected match m - i at query q - i). history holds per-frame candidates
/// ordered by query id; entries without a match break the chain. k = 0
/// disables the check.
bool consistency_check(std::span<const Detection> history, const Hypothesis& candidate,
                       std::uint32_t query_frame_id, int k);

/// Frame-by-frame loop-closure detector: match against the previous frame,
/// learn codewords, query the vocabulary (pre-update, so a frame can never
/// match itself), filter temporally, and accept the top hypothesis when it
/// clears the likelihood threshold and the consistency check. Deterministic
/// for a fixed (sequence, params, pattern).
///
/// One instance processes one sequence strictly serially.
class Pipeline {
public:
    Pipeline(DetectionParams params, TestPattern pattern);

    /// Frames must arrive in strictly increasing id order. Frames carrying
    /// keypoints bypass detection (ROI/border filtering still applies);
    /// otherwise FAST detection runs with the configured threshold.
    Detection process_frame(Frame frame);
    Detection process_frame(int id, Image image);

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<Detection>& detections() const { return detections_; }
    const DetectionParams& params() const { return params_; }

private:
    DetectionParams params_;
    TestPattern pattern_;
    Vocabulary vocab_;
    std::optional<Frame> prev_;
    std::vector<Detection> candidate_history_;
    std::vector<Detection> detections_;
    std::optional<int> last_id_;

    Roi roi_for(const Image& image) const;
};

/// CSV log: "query_frame,matched_frame,likelihood", matched_frame empty for
/// no-detection rows.
void write_detection_csv(const std::filesystem::path& path,
                         std::span<const Detection> detections);

}  // namespace mbow
