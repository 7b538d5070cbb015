#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tolquot {

using ElementId = std::uint32_t;

// A subset of the universe {0, ..., universe_size - 1}, stored as a bitset.
// Sets compare by their numeric bitset value (element i has weight 2^i);
// this is the canonical order used for covering blocks.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe_size);

  static ElementSet full(std::size_t universe_size);
  static ElementSet singleton(std::size_t universe_size, ElementId e);
  static ElementSet of(std::size_t universe_size, std::span<ElementId const> members);
  static ElementSet of(std::size_t universe_size, std::initializer_list<ElementId> members);
  // Low bits of `mask` become members; universe_size must be <= 64.
  static ElementSet from_mask(std::size_t universe_size, std::uint64_t mask);

  std::size_t universe_size() const noexcept { return size_; }

  bool test(ElementId e) const noexcept {
    return (words_[e >> 6] >> (e & 63)) & 1U;
  }
  void set(ElementId e) noexcept { words_[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void reset(ElementId e) noexcept { words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }

  std::size_t count() const noexcept;
  bool empty() const noexcept;
  bool intersects(ElementSet const& other) const noexcept;
  bool is_subset_of(ElementSet const& other) const noexcept;

  // Smallest member, or nullopt if empty.
  std::optional<ElementId> first() const noexcept;
  // Smallest member strictly greater than e, or nullopt.
  std::optional<ElementId> next(ElementId e) const noexcept;

  std::vector<ElementId> members() const;

  // Low 64 bits as a mask (exact when universe_size <= 64).
  std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        f(static_cast<ElementId>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  ElementSet& operator&=(ElementSet const& other) noexcept;
  ElementSet& operator|=(ElementSet const& other) noexcept;
  // Set difference.
  ElementSet& operator-=(ElementSet const& other) noexcept;

  friend ElementSet operator&(ElementSet a, ElementSet const& b) { return a &= b; }
  friend ElementSet operator|(ElementSet a, ElementSet const& b) { return a |= b; }
  friend ElementSet operator-(ElementSet a, ElementSet const& b) { return a -= b; }

  friend bool operator==(ElementSet const&, ElementSet const&) = default;
  friend std::strong_ordering operator<=>(ElementSet const& a, ElementSet const& b) noexcept;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// "{0,2,5}"
std::string to_string(ElementSet const& s);

}  // namespace tolquot
