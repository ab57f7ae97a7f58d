#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nomavlc/pairing.hpp"

namespace nomavlc {

/// LED x data-subcarrier grid. Each cell holds the index of a pair local to
/// that LED, or `unassigned`. The column count is the per-LED data
/// subcarrier limit, so no LED can exceed it.
class AllocationMatrix {
 public:
  static constexpr int unassigned = -1;

  AllocationMatrix() = default;
  AllocationMatrix(std::size_t leds, std::size_t subcarriers)
      : leds_(leds), subcarriers_(subcarriers), cells_(leds * subcarriers, unassigned) {}

  std::size_t leds() const { return leds_; }
  std::size_t subcarriers() const { return subcarriers_; }

  int operator()(std::size_t led, std::size_t k) const { return cells_[led * subcarriers_ + k]; }
  void set(std::size_t led, std::size_t k, int value) { cells_[led * subcarriers_ + k] = value; }
  bool occupied(std::size_t led, std::size_t k) const { return (*this)(led, k) != unassigned; }

  /// Subcarriers held by one pair, ascending.
  std::vector<std::size_t> subcarriers_of(std::size_t led, std::size_t pair) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < subcarriers_; ++k)
      if ((*this)(led, k) == static_cast<int>(pair)) out.push_back(k);
    return out;
  }

  std::size_t used_subcarriers(std::size_t led) const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < subcarriers_; ++k) n += occupied(led, k);
    return n;
  }

  /// Every cell references an existing pair of its own LED.
  bool valid_for(const PairSet& pairs) const {
    if (pairs.leds() != leds_) return false;
    for (std::size_t i = 0; i < leds_; ++i)
      for (std::size_t k = 0; k < subcarriers_; ++k) {
        const int v = (*this)(i, k);
        if (v < unassigned || (v >= 0 && static_cast<std::size_t>(v) >= pairs.pair_count(i)))
          return false;
      }
    return true;
  }

  /// 64-bit FNV-1a hash of the cell contents.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : cells_) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  const std::vector<int>& cells() const { return cells_; }

  friend bool operator==(const AllocationMatrix&, const AllocationMatrix&) = default;

 private:
  std::size_t leds_ = 0;
  std::size_t subcarriers_ = 0;
  std::vector<int> cells_;
};

inline std::size_t hamming_distance(const AllocationMatrix& a, const AllocationMatrix& b) {
  if (a.leds() != b.leds() || a.subcarriers() != b.subcarriers())
    throw std::invalid_argument("allocation shapes differ");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.cells().size(); ++i) n += a.cells()[i] != b.cells()[i];
  return n;
}

}  // namespace nomavlc
