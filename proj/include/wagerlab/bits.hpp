#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wagerlab {

/// One coin toss. External text forms: '+'/'-' with aliases '1'/'0'.
enum class Bit : std::int8_t { minus = -1, plus = +1 };

inline int bit_value(Bit b) { return static_cast<int>(b); }
inline Bit flip(Bit b) { return b == Bit::plus ? Bit::minus : Bit::plus; }
inline char bit_char(Bit b) { return b == Bit::plus ? '+' : '-'; }

inline std::optional<Bit> bit_from_char(char c) {
  switch (c) {
    case '+':
    case '1':
      return Bit::plus;
    case '-':
    case '0':
      return Bit::minus;
    default:
      return std::nullopt;
  }
}

/// A finite bit string, the domain of every strategy. Supports cheap
/// push/pop so evaluators and path caches can walk prefix trees in place.
class History {
 public:
  History() = default;
  explicit History(std::vector<Bit> bits) : bits_(std::move(bits)) {}

  static History parse(std::string_view text) {
    std::vector<Bit> bits;
    bits.reserve(text.size());
    for (char c : text) {
      auto b = bit_from_char(c);
      if (!b) throw std::invalid_argument(std::string("bad bit character: ") + c);
      bits.push_back(*b);
    }
    return History(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  Bit operator[](std::size_t i) const { return bits_[i]; }

  void push_back(Bit b) { bits_.push_back(b); }
  void pop_back() { bits_.pop_back(); }
  void truncate(std::size_t n) { bits_.resize(n); }
  void clear() { bits_.clear(); }

  History prefix(std::size_t n) const {
    return History(std::vector<Bit>(bits_.begin(), bits_.begin() + n));
  }

  /// Length of the longest common prefix with `other`.
  std::size_t common_prefix(const History& other) const {
    const std::size_t n = std::min(size(), other.size());
    std::size_t i = 0;
    while (i < n && bits_[i] == other.bits_[i]) ++i;
    return i;
  }

  std::span<const Bit> bits() const { return bits_; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (Bit b : bits_) s.push_back(bit_char(b));
    return s;
  }

  auto begin() const { return bits_.begin(); }
  auto end() const { return bits_.end(); }

  friend bool operator==(const History& a, const History& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<Bit> bits_;
};

}  // namespace wagerlab
