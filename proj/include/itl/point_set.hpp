#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace itl {

using Word = std::uint64_t;

constexpr std::size_t word_bits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + word_bits - 1) / word_bits; }

inline bool test_bit(std::span<const Word> words, std::size_t i) {
  return (words[i / word_bits] >> (i % word_bits)) & 1U;
}

inline void set_bit(std::span<Word> words, std::size_t i) {
  words[i / word_bits] |= Word{1} << (i % word_bits);
}

// Clears the padding bits past `bits` in the last word.
inline void trim_words(std::span<Word> words, std::size_t bits) {
  if (bits % word_bits != 0 && !words.empty()) {
    words.back() &= (Word{1} << (bits % word_bits)) - 1;
  }
}

/// Fixed-size bitset over the points of one frame: a formula's extension.
class PointSet {
public:
  PointSet() = default;
  explicit PointSet(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const { return test_bit(words_, i); }
  void set(std::size_t i) { set_bit(words_, i); }
  void reset(std::size_t i) { words_[i / word_bits] &= ~(Word{1} << (i % word_bits)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool all() const { return count() == size_; }
  bool none() const { return count() == 0; }

  std::span<Word> words() noexcept { return words_; }
  std::span<const Word> words() const noexcept { return words_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

}  // namespace itl
