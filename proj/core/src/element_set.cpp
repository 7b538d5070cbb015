#include "tolquot/element_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace tolquot {

namespace {
std::size_t word_count(std::size_t n) { return (n + 63) / 64; }
}  // namespace

ElementSet::ElementSet(std::size_t universe_size)
    : size_(universe_size), words_(word_count(universe_size), 0) {}

ElementSet ElementSet::full(std::size_t universe_size) {
  ElementSet s(universe_size);
  std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
  if (universe_size % 64 != 0) {
    s.words_.back() = (std::uint64_t{1} << (universe_size % 64)) - 1;
  }
  return s;
}

ElementSet ElementSet::singleton(std::size_t universe_size, ElementId e) {
  ElementSet s(universe_size);
  s.set(e);
  return s;
}

ElementSet ElementSet::of(std::size_t universe_size, std::span<ElementId const> members) {
  ElementSet s(universe_size);
  for (ElementId e : members) {
    if (e >= universe_size) {
      throw std::out_of_range("element " + std::to_string(e) + " outside universe of size "
                              + std::to_string(universe_size));
    }
    s.set(e);
  }
  return s;
}

ElementSet ElementSet::of(std::size_t universe_size, std::initializer_list<ElementId> members) {
  return of(universe_size, std::span<ElementId const>(members.begin(), members.size()));
}

ElementSet ElementSet::from_mask(std::size_t universe_size, std::uint64_t mask) {
  ElementSet s(universe_size);
  if (!s.words_.empty()) {
    s.words_[0] = universe_size >= 64 ? mask : mask & ((std::uint64_t{1} << universe_size) - 1);
  }
  return s;
}

std::size_t ElementSet::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) {
    c += static_cast<std::size_t>(std::popcount(w));
  }
  return c;
}

bool ElementSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool ElementSet::intersects(ElementSet const& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) {
      return true;
    }
  }
  return false;
}

bool ElementSet::is_subset_of(ElementSet const& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) {
      return false;
    }
  }
  return true;
}

std::optional<ElementId> ElementSet::first() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) {
      return static_cast<ElementId>(w * 64 + std::countr_zero(words_[w]));
    }
  }
  return std::nullopt;
}

std::optional<ElementId> ElementSet::next(ElementId e) const noexcept {
  std::size_t const start = std::size_t{e} + 1;
  if (start >= size_) {
    return std::nullopt;
  }
  std::size_t w = start >> 6;
  std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (start & 63));
  while (true) {
    if (bits != 0) {
      return static_cast<ElementId>(w * 64 + std::countr_zero(bits));
    }
    if (++w == words_.size()) {
      return std::nullopt;
    }
    bits = words_[w];
  }
}

std::vector<ElementId> ElementSet::members() const {
  std::vector<ElementId> out;
  out.reserve(count());
  for_each([&](ElementId e) { out.push_back(e); });
  return out;
}

ElementSet& ElementSet::operator&=(ElementSet const& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= other.words_[i];
  }
  return *this;
}

ElementSet& ElementSet::operator|=(ElementSet const& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
  }
  return *this;
}

ElementSet& ElementSet::operator-=(ElementSet const& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= ~other.words_[i];
  }
  return *this;
}

std::strong_ordering operator<=>(ElementSet const& a, ElementSet const& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) {
    return c;
  }
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (auto c = a.words_[i] <=> b.words_[i]; c != 0) {
      return c;
    }
  }
  return std::strong_ordering::equal;
}

std::string to_string(ElementSet const& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](ElementId e) {
    if (!first) {
      out += ',';
    }
    out += std::to_string(e);
    first = false;
  });
  return out + "}";
}

}  // namespace tolquot
