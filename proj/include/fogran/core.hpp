#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogran {

using Rng = std::mt19937_64;

// Bitmask over at most 64 indices. Users and files get distinct tags so that a
// user set can't be passed where a file set is expected.
template <class Tag>
class IndexSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::size_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::size_t*;
    using reference = std::size_t;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr IndexSet() = default;
  constexpr IndexSet(std::initializer_list<std::size_t> items) {
    for (std::size_t i : items) insert(i);
  }

  static constexpr IndexSet from_bits(std::uint64_t bits) {
    IndexSet s;
    s.bits_ = bits;
    return s;
  }
  static constexpr IndexSet single(std::size_t i) {
    IndexSet s;
    s.insert(i);
    return s;
  }
  // {0, ..., n-1}
  static constexpr IndexSet first_n(std::size_t n) {
    if (n > kCapacity) throw std::out_of_range("IndexSet::first_n: more than 64 indices");
    return from_bits(n == kCapacity ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t i) const { return i < kCapacity && ((bits_ >> i) & 1u); }
  constexpr void insert(std::size_t i) {
    if (i >= kCapacity) throw std::out_of_range("IndexSet: index >= 64");
    bits_ |= std::uint64_t{1} << i;
  }
  constexpr void erase(std::size_t i) {
    if (i < kCapacity) bits_ &= ~(std::uint64_t{1} << i);
  }
  constexpr std::size_t front() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }
  constexpr bool subset_of(IndexSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(IndexSet o) const { return (bits_ & o.bits_) != 0; }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<std::size_t> to_vector() const { return {begin(), end()}; }

  constexpr IndexSet operator|(IndexSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr IndexSet operator&(IndexSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr IndexSet operator-(IndexSet o) const { return from_bits(bits_ & ~o.bits_); }
  constexpr IndexSet& operator|=(IndexSet o) { bits_ |= o.bits_; return *this; }
  constexpr IndexSet& operator&=(IndexSet o) { bits_ &= o.bits_; return *this; }
  constexpr IndexSet& operator-=(IndexSet o) { bits_ &= ~o.bits_; return *this; }
  constexpr bool operator==(const IndexSet&) const = default;
  constexpr auto operator<=>(const IndexSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

struct FileTag {};
struct UserTag {};
using FileSet = IndexSet<FileTag>;
using UserSet = IndexSet<UserTag>;

template <class Tag>
std::string to_string(IndexSet<Tag> s, const char* prefix) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s) {
    if (!first) out += ",";
    out += prefix + std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double distance(Point a, Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace fogran
