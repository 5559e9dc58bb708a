#include "mbow/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

namespace mbow {

std::vector<Hypothesis> temporal_filter(std::vector<Hypothesis> hypotheses) {
    if (hypotheses.empty()) return hypotheses;

    std::unordered_set<std::uint32_t> present;
    present.reserve(hypotheses.size());
    for (const Hypothesis& h : hypotheses) present.insert(h.frame_id);

    std::vector<Hypothesis> kept;
    kept.reserve(hypotheses.size());
    for (const Hypothesis& h : hypotheses) {
        const bool has_prev = h.frame_id > 0 && present.count(h.frame_id - 1) > 0;
        const bool has_next = present.count(h.frame_id + 1) > 0;
        if (has_prev || has_next) kept.push_back(h);
    }

    double total = 0.0;
    for (const Hypothesis& h : kept) total += h.likelihood;
    if (total > 0.0)
        for (Hypothesis& h : kept) h.likelihood /= total;
    return kept;
}

bool consistency_check(std::span<const Detection> history, const Hypothesis& candidate,
                       std::uint32_t query_frame_id, int k) {
    if (k <= 0) return true;
    for (int i = 1; i <= k; ++i) {
        if (static_cast<std::int64_t>(query_frame_id) - i < 0) return false;
        const std::uint32_t wanted_query = query_frame_id - static_cast<std::uint32_t>(i);
        const Detection* past = nullptr;
        for (auto it = history.rbegin(); it != history.rend(); ++it) {
            if (it->query_frame_id == wanted_query) {
                past = &*it;
                break;
            }
            if (it->query_frame_id < wanted_query) break;
        }
        if (!past || !past->matched_frame_id) return false;
        const std::int64_t expected =
            static_cast<std::int64_t>(candidate.frame_id) - i;
        const std::int64_t actual = static_cast<std::int64_t>(*past->matched_frame_id);
        if (std::abs(actual - expected) > 2) return false;
    }
    return true;
}

Pipeline::Pipeline(DetectionParams params, TestPattern pattern)
    : params_(params), pattern_(std::move(pattern)), vocab_(params) {
    if (pattern_.bits() != params_.bits)
        throw std::invalid_argument("Pipeline: pattern bit count differs from params.bits");
    if (params_.psi <= 0 || params_.upsilon <= 0 || params_.gamma == 0 ||
        params_.bits == 0 || params_.t_local <= 0 || params_.accept_likelihood <= 0 ||
        params_.k_consistency < 0)
        throw std::invalid_argument("Pipeline: detection parameters must be positive");
}

Roi Pipeline::roi_for(const Image& image) const {
    if (params_.roi) {
        const auto& r = *params_.roi;
        return Roi{r[0], r[1], r[2], r[3]};
    }
    return Roi::full(image);
}

Detection Pipeline::process_frame(int id, Image image) {
    Frame frame;
    frame.id = id;
    frame.image = std::move(image);
    return process_frame(std::move(frame));
}

Detection Pipeline::process_frame(Frame frame) {
    if (last_id_ && frame.id <= *last_id_)
        throw std::invalid_argument("process_frame: frame ids must be strictly increasing");
    last_id_ = frame.id;

    const Roi roi = roi_for(frame.image);
    if (frame.keypoints.empty()) {
        frame.keypoints = detect_keypoints(frame.image, params_.upsilon, roi);
    } else {
        frame.keypoints = filter_keypoints(frame.keypoints, frame.image, roi).accepted;
    }
    compute_descriptors(frame, pattern_);

    // Learn one codeword per matched pair via the descriptor shortcut.
    std::vector<Codeword> codewords;
    if (prev_) {
        const auto matches = match_features(*prev_, frame, params_.gamma,
                                            params_.raw_match_threshold(),
                                            params_.search_radius);
        codewords.reserve(matches.size());
        for (const MatchPair& m : matches) {
            Codeword learned = learn_codeword(prev_->patches[m.prev_index],
                                              frame.patches[m.cur_index], pattern_,
                                              prev_->descriptors[m.prev_index],
                                              frame.descriptors[m.cur_index]);
            if (learned.mask.cardinality() == 0) continue;  // discard the pair
            codewords.push_back(std::move(learned));
        }
    }

    // Query before updating so the current frame cannot vote for itself.
    const auto votes = vocab_.query(static_cast<std::uint32_t>(frame.id), codewords,
                                    params_.t_local);
    std::vector<Hypothesis> hyps = likelihoods(votes);
    if (params_.use_temporal_filter) hyps = temporal_filter(std::move(hyps));

    Detection detection;
    detection.query_frame_id = static_cast<std::uint32_t>(frame.id);

    std::optional<Hypothesis> top;
    for (const Hypothesis& h : hyps)
        if (!top || h.likelihood > top->likelihood) top = h;

    Detection candidate = detection;
    if (top) {
        candidate.matched_frame_id = top->frame_id;
        candidate.likelihood = top->likelihood;
    }

    if (top && top->likelihood >= params_.accept_likelihood &&
        consistency_check(candidate_history_, *top, detection.query_frame_id,
                          params_.k_consistency)) {
        detection.matched_frame_id = top->frame_id;
        detection.likelihood = top->likelihood;
    }

    candidate_history_.push_back(candidate);

    vocab_.admit_frame_codewords(static_cast<std::uint32_t>(frame.id), codewords);

    prev_ = std::move(frame);
    detections_.push_back(detection);
    return detection;
}

void write_detection_csv(const std::filesystem::path& path,
                         std::span<const Detection> detections) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write detection log: " + path.string());
    out << "query_frame,matched_frame,likelihood\n";
    for (const Detection& d : detections) {
        out << d.query_frame_id << ',';
        if (d.matched_frame_id) out << *d.matched_frame_id;
        out << ',' << d.likelihood << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mbow
