#include "mbow/bitvector.hpp"

#include <stdexcept>

#include "mbow/kernels.hpp"

namespace mbow {
namespace {

std::size_t words_for(std::size_t length) { return (length + 63) / 64; }

void require_same_length(const BitVector& a, const BitVector& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("BitVector length mismatch: " +
                                    std::to_string(a.length()) + " vs " +
                                    std::to_string(b.length()));
}

}  // namespace

BitVector::BitVector(std::size_t length)
    : length_(length), words_(words_for(length), 0) {}

BitVector BitVector::ones(std::size_t length) {
    BitVector v(length);
    for (auto& w : v.words_) w = ~std::uint64_t{0};
    v.clear_tail();
    return v;
}

BitVector BitVector::from_string(std::string_view text) {
    BitVector v(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '0' && c != '1')
            throw std::invalid_argument("BitVector text must be '0'/'1', got '" +
                                        std::string(1, c) + "'");
        // Text is most-significant first: character 0 is bit length-1.
        v.set_bit(text.size() - 1 - i, c == '1');
    }
    return v;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t length) {
    if (bytes.size() != (length + 7) / 8)
        throw std::invalid_argument("BitVector byte count mismatch");
    BitVector v(length);
    for (std::size_t i = 0; i < length; ++i)
        if ((bytes[i / 8] >> (i % 8)) & 1) v.set_bit(i, true);
    return v;
}

bool BitVector::bit(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("BitVector bit index out of range");
    return (words_[i / 64] >> (i % 64)) & 1;
}

void BitVector::set_bit(std::size_t i, bool value) {
    if (i >= length_) throw std::out_of_range("BitVector bit index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (value)
        words_[i / 64] |= mask;
    else
        words_[i / 64] &= ~mask;
}

std::size_t BitVector::cardinality() const {
    return kernels::active().popcount_words(words_.data(), words_.size());
}

std::string BitVector::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if (bit(i)) s[length_ - 1 - i] = '1';
    return s;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> bytes((length_ + 7) / 8, 0);
    for (std::size_t i = 0; i < length_; ++i)
        if (bit(i)) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return bytes;
}

void BitVector::clear_tail() {
    const std::size_t tail = length_ % 64;
    if (tail != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << tail) - 1;
}

BitVector bit_xor(const BitVector& a, const BitVector& b) {
    require_same_length(a, b);
    BitVector out(a.length());
    kernels::active().xor_words(out.words_.data(), a.words_.data(), b.words_.data(),
                                out.words_.size());
    return out;
}

BitVector bit_and(const BitVector& a, const BitVector& b) {
    require_same_length(a, b);
    BitVector out(a.length());
    kernels::active().and_words(out.words_.data(), a.words_.data(), b.words_.data(),
                                out.words_.size());
    return out;
}

BitVector bit_or(const BitVector& a, const BitVector& b) {
    require_same_length(a, b);
    BitVector out(a.length());
    kernels::active().or_words(out.words_.data(), a.words_.data(), b.words_.data(),
                               out.words_.size());
    return out;
}

BitVector bit_not(const BitVector& a) {
    BitVector out(a.length());
    kernels::active().not_words(out.words_.data(), a.words_.data(), out.words_.size());
    out.clear_tail();
    return out;
}

std::size_t cardinality(const BitVector& a) { return a.cardinality(); }

std::size_t hamming(const BitVector& a, const BitVector& b) {
    require_same_length(a, b);
    return kernels::active().popcount_xor(a.words().data(), b.words().data(),
                                          a.word_count());
}

}  // namespace mbow
