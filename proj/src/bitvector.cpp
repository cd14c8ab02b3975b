#include "fsr/bitvector.hpp"

#include <cassert>
#include <stdexcept>

namespace fsr {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~Word{0} : Word{0}) {
  if (value && size % kWordBits != 0) {
    words_.back() &= (Word{1} << (size % kWordBits)) - 1;
  }
}

std::size_t BitVector::count() const { return popcount_words(words_); }

bool BitVector::is_subset_of(const BitVector& other) const {
  if (other.size_ != size_) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

std::vector<std::size_t> BitVector::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word bits = words_[w];
    while (bits != 0) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

std::size_t BitVector::hash() const {
  // FNV-1a over words, folded with the length.
  std::uint64_t h = 1469598103934665603ULL ^ size_;
  for (auto w : words_) {
    h ^= w;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

BitVector operator&(BitVector lhs, const BitVector& rhs) {
  lhs &= rhs;
  return lhs;
}

std::size_t intersect_count(const BitVector& a, const BitVector& b) {
  assert(a.size() == b.size());
  auto wa = a.words();
  auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(wa[w] & wb[w]));
  }
  return total;
}

}  // namespace fsr
