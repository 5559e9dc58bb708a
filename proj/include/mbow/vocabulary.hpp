#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbow/codeword.hpp"
#include "mbow/params.hpp"

namespace mbow {

/// Candidate loop-closure frame with a normalized likelihood.
struct Hypothesis {
    std::uint32_t frame_id = 0;
    double likelihood = 0.0;
};

struct VocabularyEntry {
    std::uint32_t word_id = 0;
    Codeword codeword;
    /// (frame_id, votes), sorted by frame_id; votes >= 1.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> occurrences;
    std::uint64_t total_votes = 0;
};

/// Incremental bag-of-words store. Entries are append-only with stable dense
/// word ids; admission merges codewords within the matching threshold and
/// grows the inverted occurrence lists.
///
/// Concurrency: single writer. admit_frame_codewords must be externally
/// serialized per instance; query is read-only and may run concurrently with
/// other queries but not with admission (asserted in debug builds).
class Vocabulary {
public:
    explicit Vocabulary(DetectionParams params) : params_(std::move(params)) {}

    // The debug-only write guard is instance state, not vocabulary content.
    Vocabulary(const Vocabulary& other) : params_(other.params_), entries_(other.entries_) {}
    Vocabulary(Vocabulary&& other) noexcept
        : params_(std::move(other.params_)), entries_(std::move(other.entries_)) {}
    Vocabulary& operator=(const Vocabulary& other) {
        params_ = other.params_;
        entries_ = other.entries_;
        return *this;
    }
    Vocabulary& operator=(Vocabulary&& other) noexcept {
        params_ = std::move(other.params_);
        entries_ = std::move(other.entries_);
        return *this;
    }

    struct AdmitResult {
        std::vector<std::uint32_t> word_ids;  ///< one per surviving codeword
        std::size_t rejected_zero_mask = 0;
    };

    /// Two-stage admission: (a) a single greedy intra-frame pass in input
    /// order merges codewords within psi of an already-kept one (weights are
    /// accumulated merge counts); (b) each survivor is absorbed by the
    /// nearest existing entry within psi (merge weighted by the entry's total
    /// votes) or becomes a new entry. Zero-mask codewords are rejected and
    /// counted.
    AdmitResult admit_frame_codewords(std::uint32_t frame_id,
                                      std::span<const Codeword> codewords);

    /// Vote-based retrieval: every (query codeword, entry) pair within psi
    /// contributes one vote per occurrence at frame f <= frame_id - t_local.
    /// Frames with fewer than 2 total votes are dropped; the result is sorted
    /// by votes descending (frame id ascending on ties).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> query(
        std::uint32_t frame_id, std::span<const Codeword> codewords, int t_local) const;

    std::size_t size() const { return entries_.size(); }
    const std::vector<VocabularyEntry>& entries() const { return entries_; }
    const DetectionParams& params() const { return params_; }

    /// Binary snapshot: header (L, entry count) then per-entry packed
    /// descriptor, packed mask, and occurrence list.
    void save_snapshot(const std::filesystem::path& path) const;
    static Vocabulary load_snapshot(const std::filesystem::path& path);

    /// Text summary: word count, mean mask cardinality, occupancy histogram.
    std::string summary() const;

private:
    DetectionParams params_;
    std::vector<VocabularyEntry> entries_;
#ifndef NDEBUG
    mutable std::atomic<bool> writing_{false};
#endif

    /// Index of the nearest entry within psi of the codeword, or npos.
    /// Uses the early-abandon scan; ties prefer the lower word id.
    std::size_t find_nearest_within(const Codeword& codeword, double psi) const;
};

/// Normalizes a vote list into likelihoods summing to 1 (empty in, empty out).
std::vector<Hypothesis> likelihoods(
    std::span<const std::pair<std::uint32_t, std::uint32_t>> votes);

}  // namespace mbow
