#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mbow {

/// Fixed-length binary vector backed by packed 64-bit words. Length is set at
/// construction and never changes; operations on vectors of different lengths
/// throw std::invalid_argument. Used both for descriptors and for masks.
///
/// Values are immutable in practice: every operation returns a new vector and
/// is safe to call concurrently. set_bit exists only to build vectors.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t length);

    static BitVector ones(std::size_t length);

    /// Parses the canonical text form: '0'/'1' characters, most-significant
    /// bit first (character 0 is bit length-1).
    static BitVector from_string(std::string_view text);

    /// Parses the canonical binary form: packed little-endian bytes, bit i at
    /// byte i/8, position i%8.
    static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t length);

    std::size_t length() const { return length_; }
    bool empty() const { return length_ == 0; }

    bool bit(std::size_t i) const;
    void set_bit(std::size_t i, bool value);

    std::size_t cardinality() const;

    std::string to_string() const;
    std::vector<std::uint8_t> to_bytes() const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::size_t word_count() const { return words_.size(); }

    bool operator==(const BitVector&) const = default;

private:
    std::size_t length_ = 0;
    std::vector<std::uint64_t> words_;

    void clear_tail();
    friend BitVector bit_xor(const BitVector&, const BitVector&);
    friend BitVector bit_and(const BitVector&, const BitVector&);
    friend BitVector bit_or(const BitVector&, const BitVector&);
    friend BitVector bit_not(const BitVector&);
};

BitVector bit_xor(const BitVector& a, const BitVector& b);
BitVector bit_and(const BitVector& a, const BitVector& b);
BitVector bit_or(const BitVector& a, const BitVector& b);
BitVector bit_not(const BitVector& a);

std::size_t cardinality(const BitVector& a);

/// Hamming distance: cardinality(a ^ b). Symmetric, in [0, length].
std::size_t hamming(const BitVector& a, const BitVector& b);

inline BitVector operator^(const BitVector& a, const BitVector& b) { return bit_xor(a, b); }
inline BitVector operator&(const BitVector& a, const BitVector& b) { return bit_and(a, b); }
inline BitVector operator|(const BitVector& a, const BitVector& b) { return bit_or(a, b); }
inline BitVector operator~(const BitVector& a) { return bit_not(a); }

}  // namespace mbow
