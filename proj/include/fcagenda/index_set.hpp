#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fcagenda/kernels.hpp"

namespace fcagenda {

// Fixed-universe set of indices backed by 64-bit words. The tag keeps object
// sets and feature sets from being mixed up. Bits past the universe are
// always zero.
template <class Tag>
class IndexSet {
 public:
  using Word = kernels::Word;
  static constexpr std::size_t kWordBits = 64;

  IndexSet() = default;
  explicit IndexSet(std::size_t universe)
      : universe_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}

  IndexSet(std::size_t universe, std::initializer_list<std::size_t> members)
      : IndexSet(universe) {
    for (std::size_t i : members) insert(i);
  }

  template <class Range>
  static IndexSet from_indices(std::size_t universe, const Range& members) {
    IndexSet s(universe);
    for (std::size_t i : members) s.insert(i);
    return s;
  }

  static IndexSet full(std::size_t universe) {
    IndexSet s(universe);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const Word> words() const noexcept { return words_; }

  bool contains(std::size_t i) const {
    assert(i < universe_);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void insert(std::size_t i) {
    assert(i < universe_);
    words_[i / kWordBits] |= Word{1} << (i % kWordBits);
  }
  void erase(std::size_t i) {
    assert(i < universe_);
    words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }
  void fill() {
    for (auto& w : words_) w = ~Word{0};
    trim();
  }

  std::size_t count() const { return kernels::active().popcount(words_.data(), words_.size()); }
  bool empty() const {
    for (Word w : words_) {
      if (w) return false;
    }
    return true;
  }
  bool is_full() const { return count() == universe_; }

  IndexSet& operator&=(const IndexSet& o) {
    assert(universe_ == o.universe_);
    kernels::active().and_assign(words_.data(), o.words_.data(), words_.size());
    return *this;
  }
  friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
    assert(a.universe_ == b.universe_);
    IndexSet r(a.universe_);
    kernels::active().and_words(r.words_.data(), a.words_.data(), b.words_.data(),
                                a.words_.size());
    return r;
  }
  IndexSet& operator|=(const IndexSet& o) {
    assert(universe_ == o.universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }

  // Members of *this that are not in o.
  IndexSet minus(const IndexSet& o) const {
    assert(universe_ == o.universe_);
    IndexSet r(*this);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }

  bool is_subset_of(const IndexSet& o) const {
    assert(universe_ == o.universe_);
    return kernels::active().is_subset(words_.data(), o.words_.data(), words_.size());
  }
  bool intersects(const IndexSet& o) const {
    assert(universe_ == o.universe_);
    return kernels::active().intersects(words_.data(), o.words_.data(), words_.size());
  }
  std::size_t intersection_count(const IndexSet& o) const {
    assert(universe_ == o.universe_);
    return kernels::active().and_popcount(words_.data(), o.words_.data(), words_.size());
  }

  // True when both sets agree on every index below `bound`.
  bool equal_below(const IndexSet& o, std::size_t bound) const {
    assert(universe_ == o.universe_ && bound <= universe_);
    const std::size_t full_words = bound / kWordBits;
    if (!kernels::active().equal(words_.data(), o.words_.data(), full_words)) return false;
    const std::size_t rest = bound % kWordBits;
    if (rest == 0) return true;
    const Word mask = (Word{1} << rest) - 1;
    return ((words_[full_words] ^ o.words_[full_words]) & mask) == 0;
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.universe_ == b.universe_ &&
           kernels::active().equal(a.words_.data(), b.words_.data(), a.words_.size());
  }

  // Lexicographic order of the bit strings x_0 x_1 ... x_{n-1} with 0 < 1:
  // at the first index where the sets differ, the set lacking it is smaller.
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
    if (a.universe_ != b.universe_) return a.universe_ <=> b.universe_;
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      const Word diff = a.words_[i] ^ b.words_[i];
      if (diff == 0) continue;
      const Word lowest = diff & (~diff + 1);
      return (a.words_[i] & lowest) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(bits));
        f(w * kWordBits + bit);
        bits &= bits - 1;
      }
    }
  }

  // Members in ascending order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  void trim() {
    const std::size_t rest = universe_ % kWordBits;
    if (rest != 0 && !words_.empty()) words_.back() &= (Word{1} << rest) - 1;
  }

  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

struct ObjectTag;
struct FeatureTag;
using ObjectSet = IndexSet<ObjectTag>;
using FeatureSet = IndexSet<FeatureTag>;

}  // namespace fcagenda
