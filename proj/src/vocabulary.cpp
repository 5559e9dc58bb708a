#include "mbow/vocabulary.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mbow/kernels.hpp"

namespace mbow {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

#ifndef NDEBUG
struct WriteGuard {
    std::atomic<bool>& flag;
    explicit WriteGuard(std::atomic<bool>& f) : flag(f) {
        const bool was = flag.exchange(true);
        assert(!was && "Vocabulary admission must be externally serialized");
    }
    ~WriteGuard() { flag.store(false); }
};
#endif

// Exact rational comparison of two masked distances num/den (den > 0).
bool rational_less(std::uint64_t num_a, std::uint64_t den_a, std::uint64_t num_b,
                   std::uint64_t den_b) {
    return num_a * den_b < num_b * den_a;
}

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

constexpr char kSnapshotMagic[4] = {'M', 'B', 'V', '1'};

}  // namespace

std::size_t Vocabulary::find_nearest_within(const Codeword& codeword, double psi) const {
    const auto& ops = kernels::active();
    const std::uint64_t c_in = codeword.mask.cardinality();

    std::size_t best = kNone;
    std::uint64_t best_num = 0, best_den = 1;

    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const Codeword& entry = entries_[i].codeword;
        const std::uint64_t c2 = entry.mask.cardinality();
        const std::uint64_t den = c_in + c2;
        // Early-abandon limit: the running popcount of (x1^x2) & y1 & y2
        // lower-bounds the masked distance, so once it clears
        // psi * (|y1|+|y2|) / max(|y1|,|y2|) the pair cannot be within psi.
        // +1 keeps the inclusive boundary safe against the rounded division.
        const auto q_limit = 1 + static_cast<std::uint64_t>(
            std::floor(psi * static_cast<double>(den) /
                       static_cast<double>(std::max(c_in, c2))));
        std::uint64_t d12 = 0, d21 = 0;
        if (!ops.masked_pair_abandon(codeword.bits.words().data(),
                                     entry.bits.words().data(),
                                     codeword.mask.words().data(),
                                     entry.mask.words().data(),
                                     codeword.bits.word_count(), q_limit, &d12, &d21))
            continue;
        const std::uint64_t num = c2 * d12 + c_in * d21;
        if (static_cast<double>(num) > psi * static_cast<double>(den)) continue;
        if (best == kNone || rational_less(num, den, best_num, best_den)) {
            best = i;
            best_num = num;
            best_den = den;
        }
    }
    return best;
}

Vocabulary::AdmitResult Vocabulary::admit_frame_codewords(
    std::uint32_t frame_id, std::span<const Codeword> codewords) {
#ifndef NDEBUG
    WriteGuard guard(writing_);
#endif
    AdmitResult result;

    // (a) Intra-frame merge: greedy single pass in input order.
    struct Pending {
        Codeword codeword;
        std::uint64_t weight;
    };
    std::vector<Pending> kept;
    for (const Codeword& incoming : codewords) {
        if (incoming.length() != params_.bits)
            throw std::invalid_argument("admit_frame_codewords: wrong codeword length");
        if (incoming.mask.cardinality() == 0) {
            ++result.rejected_zero_mask;
            continue;
        }
        bool merged = false;
        for (Pending& p : kept) {
            if (!masked_within(p.codeword, incoming, params_.psi)) continue;
            if (auto m = merge_codewords(p.codeword, incoming, p.weight, 1)) {
                p.codeword = std::move(*m);
                p.weight += 1;
                merged = true;
                break;
            }
            // Zero-mask merge result: keep the pair distinct.
        }
        if (!merged) kept.push_back({incoming, 1});
    }

    // (b) Vocabulary match: absorb into the nearest entry or append.
    for (Pending& p : kept) {
        const std::size_t idx = find_nearest_within(p.codeword, params_.psi);
        bool absorbed = false;
        if (idx != kNone) {
            VocabularyEntry& entry = entries_[idx];
            if (auto m = merge_codewords(entry.codeword, p.codeword, entry.total_votes,
                                         p.weight)) {
                entry.codeword = std::move(*m);
                auto& occ = entry.occurrences;
                if (!occ.empty() && occ.back().first == frame_id)
                    occ.back().second += static_cast<std::uint32_t>(p.weight);
                else
                    occ.emplace_back(frame_id, static_cast<std::uint32_t>(p.weight));
                entry.total_votes += p.weight;
                result.word_ids.push_back(entry.word_id);
                absorbed = true;
            }
        }
        if (!absorbed) {
            VocabularyEntry entry;
            entry.word_id = static_cast<std::uint32_t>(entries_.size());
            entry.codeword = std::move(p.codeword);
            entry.occurrences.emplace_back(frame_id, static_cast<std::uint32_t>(p.weight));
            entry.total_votes = p.weight;
            result.word_ids.push_back(entry.word_id);
            entries_.push_back(std::move(entry));
        }
    }
    return result;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Vocabulary::query(
    std::uint32_t frame_id, std::span<const Codeword> codewords, int t_local) const {
#ifndef NDEBUG
    assert(!writing_.load() && "Vocabulary query raced an admission");
#endif
    const auto& ops = kernels::active();
    const std::int64_t newest_allowed =
        static_cast<std::int64_t>(frame_id) - static_cast<std::int64_t>(t_local);

    std::map<std::uint32_t, std::uint32_t> votes;
    for (const Codeword& q : codewords) {
        if (q.mask.cardinality() == 0) continue;
        const std::uint64_t c1 = q.mask.cardinality();
        for (const VocabularyEntry& entry : entries_) {
            const std::uint64_t c2 = entry.codeword.mask.cardinality();
            const std::uint64_t den = c1 + c2;
            const auto q_limit = 1 + static_cast<std::uint64_t>(
                std::floor(params_.psi * static_cast<double>(den) /
                           static_cast<double>(std::max(c1, c2))));
            std::uint64_t d12 = 0, d21 = 0;
            if (!ops.masked_pair_abandon(q.bits.words().data(),
                                         entry.codeword.bits.words().data(),
                                         q.mask.words().data(),
                                         entry.codeword.mask.words().data(),
                                         q.bits.word_count(), q_limit, &d12, &d21))
                continue;
            if (static_cast<double>(c2 * d12 + c1 * d21) >
                params_.psi * static_cast<double>(den))
                continue;
            for (const auto& [frame, frame_votes] : entry.occurrences) {
                (void)frame_votes;
                if (static_cast<std::int64_t>(frame) <= newest_allowed) votes[frame] += 1;
            }
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& [frame, count] : votes)
        if (count >= 2) out.emplace_back(frame, count);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

void Vocabulary::save_snapshot(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocabulary snapshot: " + path.string());
    out.write(kSnapshotMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(params_.bits));
    write_u32(out, static_cast<std::uint32_t>(entries_.size()));
    for (const VocabularyEntry& entry : entries_) {
        const auto x = entry.codeword.bits.to_bytes();
        const auto y = entry.codeword.mask.to_bytes();
        out.write(reinterpret_cast<const char*>(x.data()),
                  static_cast<std::streamsize>(x.size()));
        out.write(reinterpret_cast<const char*>(y.data()),
                  static_cast<std::streamsize>(y.size()));
        write_u32(out, static_cast<std::uint32_t>(entry.occurrences.size()));
        for (const auto& [frame, votes] : entry.occurrences) {
            write_u32(out, frame);
            write_u32(out, votes);
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Vocabulary Vocabulary::load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open vocabulary snapshot: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0)
        throw std::runtime_error(path.string() + ": not a vocabulary snapshot");

    DetectionParams params;
    params.bits = read_u32(in);
    const std::uint32_t count = read_u32(in);
    if (!in) throw std::runtime_error(path.string() + ": truncated snapshot header");

    Vocabulary vocab(params);
    const std::size_t byte_count = (params.bits + 7) / 8;
    std::vector<std::uint8_t> buf(byte_count);
    for (std::uint32_t i = 0; i < count; ++i) {
        VocabularyEntry entry;
        entry.word_id = i;
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(byte_count));
        entry.codeword.bits = BitVector::from_bytes(buf, params.bits);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(byte_count));
        entry.codeword.mask = BitVector::from_bytes(buf, params.bits);
        const std::uint32_t n_occ = read_u32(in);
        if (!in) throw std::runtime_error(path.string() + ": truncated snapshot entry");
        for (std::uint32_t k = 0; k < n_occ; ++k) {
            const std::uint32_t frame = read_u32(in);
            const std::uint32_t votes = read_u32(in);
            entry.occurrences.emplace_back(frame, votes);
            entry.total_votes += votes;
        }
        if (!in) throw std::runtime_error(path.string() + ": truncated snapshot entry");
        vocab.entries_.push_back(std::move(entry));
    }
    return vocab;
}

std::string Vocabulary::summary() const {
    std::uint64_t mask_sum = 0;
    std::map<std::size_t, std::size_t> occupancy;
    for (const VocabularyEntry& entry : entries_) {
        mask_sum += entry.codeword.mask.cardinality();
        occupancy[entry.occurrences.size()] += 1;
    }
    std::ostringstream out;
    out << "words: " << entries_.size() << '\n';
    out << "mean_mask_cardinality: "
        << (entries_.empty() ? 0.0
                             : static_cast<double>(mask_sum) /
                                   static_cast<double>(entries_.size()))
        << '\n';
    out << "occupancy_histogram:\n";
    for (const auto& [occurrences, words] : occupancy)
        out << "  " << occurrences << " " << words << '\n';
    return out.str();
}

std::vector<Hypothesis> likelihoods(
    std::span<const std::pair<std::uint32_t, std::uint32_t>> votes) {
    std::vector<Hypothesis> out;
    if (votes.empty()) return out;
    std::uint64_t total = 0;
    for (const auto& [frame, count] : votes) total += count;
    out.reserve(votes.size());
    for (const auto& [frame, count] : votes)
        out.push_back({frame, static_cast<double>(count) / static_cast<double>(total)});
    return out;
}

}  // namespace mbow
