#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fsr {

// Fixed-length bit vector over 64-bit words. Bits past size() are always zero,
// so word-wise popcounts never need masking.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  static std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  std::size_t count() const;
  bool is_subset_of(const BitVector& other) const;
  std::vector<std::size_t> indices() const;

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);

  std::size_t hash() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

BitVector operator&(BitVector lhs, const BitVector& rhs);

// popcount(a & b) without materializing the intersection.
std::size_t intersect_count(const BitVector& a, const BitVector& b);

inline std::size_t popcount_words(std::span<const BitVector::Word> words) {
  std::size_t total = 0;
  for (auto w : words) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

}  // namespace fsr

template <>
struct std::hash<fsr::BitVector> {
  std::size_t operator()(const fsr::BitVector& b) const noexcept { return b.hash(); }
};
