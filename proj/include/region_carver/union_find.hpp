#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace region_carver {

/// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t size() const noexcept { return parent_.size(); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

  /// Component label per element, numbered by first appearance.
  std::vector<std::size_t> labels() {
    std::vector<std::size_t> root_label(size(), size()), out(size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const std::size_t r = find(i);
      if (root_label[r] == size()) root_label[r] = next++;
      out[i] = root_label[r];
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace region_carver
