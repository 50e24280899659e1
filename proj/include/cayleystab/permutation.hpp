#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "cayleystab/error.hpp"

namespace cayleystab {

/// A permutation of {0, ..., n-1} in image form. Permutations act on the
/// right: x^(p*q) = (x^p)^q, so p*q means "apply p, then q".
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
      if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[static_cast<std::size_t>(v)])
        throw DomainError("permutation: image array is not a bijection");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }

  static Permutation identity(int n) {
    Permutation p;
    p.images_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p.images_[static_cast<std::size_t>(i)] = i;
    return p;
  }

  /// Builds from disjoint cycles, e.g. {{0,1,2},{3,4}}.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = i;
    for (const auto& c : cycles)
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] < 0 || c[k] >= n) throw DomainError("permutation: cycle point out of range");
        img[static_cast<std::size_t>(c[k])] = c[(k + 1) % c.size()];
      }
    return Permutation(std::move(img));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator[](int x) const { return images_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) return false;
    return true;
  }

  /// Smallest moved point, or -1.
  int first_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) return static_cast<int>(i);
    return -1;
  }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out.images_[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return out;
  }

  friend Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree()) throw DomainError("permutation: degree mismatch in product");
    Permutation out;
    out.images_.resize(p.images_.size());
    for (std::size_t i = 0; i < p.images_.size(); ++i) out.images_[i] = q.images_[static_cast<std::size_t>(p.images_[i])];
    return out;
  }

  /// p^q = q⁻¹ p q.
  Permutation conjugate_by(const Permutation& q) const { return q.inverse() * *this * q; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.images_ <=> b.images_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(images_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    return boost::hash_range(p.images().begin(), p.images().end());
  }
};

}  // namespace cayleystab
