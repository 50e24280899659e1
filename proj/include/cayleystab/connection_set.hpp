#pragma once

// Inverse-closed subsets of G, indexed by independent bits over the orbits
// of x ↦ -x, plus the textual set literals used by the CLI.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/bitset.hpp"
#include "cayleystab/error.hpp"

namespace cayleystab {

/// Orbits {x, -x}, ordered by least member; singletons are the involutions and 0.
inline std::vector<std::vector<int>> iota_orbits(const AbelianGroup& g) {
  std::vector<std::vector<int>> out;
  for (int x = 0; x < g.order(); ++x) {
    const int y = g.neg(x);
    if (y < x) continue;
    if (y == x)
      out.push_back({x});
    else
      out.push_back({x, y});
  }
  return out;
}

/// The 2^{c(G)} inverse-closed subsets; bit k of an index selects orbit k.
class InverseClosedSpace {
 public:
  static constexpr int kMaxBits = 62;

  explicit InverseClosedSpace(const AbelianGroup& g) : g_(g), orbits_(iota_orbits(g)) {}

  const AbelianGroup& group() const { return g_; }
  const std::vector<std::vector<int>>& orbits() const { return orbits_; }
  int bits() const { return static_cast<int>(orbits_.size()); }
  BigInt size() const { return BigInt(1) << bits(); }

  /// Index space as a machine integer; throws when 2^c does not fit.
  std::uint64_t count() const {
    if (bits() > kMaxBits) throw CapExceeded("inverse-closed space too large to index", std::size_t{1} << 62);
    return std::uint64_t{1} << bits();
  }

  ElementSet at(std::uint64_t index) const {
    ElementSet s = g_.empty_set();
    for (std::size_t k = 0; k < orbits_.size(); ++k)
      if ((index >> k) & 1U)
        for (int x : orbits_[k]) s.set(static_cast<std::size_t>(x));
    return s;
  }

  std::uint64_t index_of(const ElementSet& s) const {
    if (!g_.is_inverse_closed(s)) throw PreconditionError("index_of: set is not inverse-closed");
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < orbits_.size(); ++k)
      if (s.test(static_cast<std::size_t>(orbits_[k][0]))) idx |= std::uint64_t{1} << k;
    return idx;
  }

 private:
  AbelianGroup g_;
  std::vector<std::vector<int>> orbits_;
};

/// Calls f(set) for every inverse-closed subset, in index order.
template <class F>
void for_each_inverse_closed(const AbelianGroup& g, F&& f) {
  const InverseClosedSpace space(g);
  const std::uint64_t n = space.count();
  for (std::uint64_t i = 0; i < n; ++i) f(space.at(i));
}

namespace detail {

inline int parse_int(std::string_view t) {
  if (t.empty()) throw DomainError("set literal: empty number");
  long long v = 0;
  bool neg = false;
  std::size_t i = 0;
  if (t[0] == '-') {
    neg = true;
    i = 1;
  }
  if (i == t.size()) throw DomainError("set literal: bad number '" + std::string(t) + "'");
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw DomainError("set literal: bad number '" + std::string(t) + "'");
    v = v * 10 + (t[i] - '0');
    if (v > (1LL << 31)) throw DomainError("set literal: number out of range");
  }
  return static_cast<int>(neg ? -v : v);
}

}  // namespace detail

/// Parses "1,4" (cyclic groups) or "(1,0),(0,3)" (coordinates over the
/// invariant factors, smallest first). "", "{}" and "-" denote the empty set.
/// Coordinates are reduced modulo their factor. Without `symmetrize` a set
/// that is not inverse-closed is a precondition error.
inline ElementSet parse_set_literal(const AbelianGroup& g, std::string_view text, bool symmetrize = false) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') s = s.substr(1, s.size() - 2);
  ElementSet out = g.empty_set();
  if (s.empty() || s == "-") return out;

  auto element_from = [&](const std::vector<int>& coords) {
    if (static_cast<int>(coords.size()) != std::max(g.rank(), 1))
      throw DomainError("set literal: element needs " + std::to_string(std::max(g.rank(), 1)) + " coordinate(s) for " + g.name());
    if (g.rank() == 0) return 0;
    GroupElement e;
    for (int i = 0; i < g.rank(); ++i) {
      const int d = g.invariant_factors()[static_cast<std::size_t>(i)];
      e.coords.push_back(((coords[static_cast<std::size_t>(i)] % d) + d) % d);
    }
    return g.index(e);
  };

  std::size_t pos = 0;
  while (pos < s.size()) {
    std::vector<int> coords;
    if (s[pos] == '(') {
      const std::size_t close = s.find(')', pos);
      if (close == std::string::npos) throw DomainError("set literal: unbalanced parenthesis");
      std::string_view inner(s.data() + pos + 1, close - pos - 1);
      std::size_t a = 0;
      while (true) {
        const std::size_t comma = inner.find(',', a);
        coords.push_back(detail::parse_int(inner.substr(a, comma == std::string_view::npos ? inner.npos : comma - a)));
        if (comma == std::string_view::npos) break;
        a = comma + 1;
      }
      pos = close + 1;
    } else {
      std::size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      coords.push_back(detail::parse_int(std::string_view(s).substr(pos, comma - pos)));
      pos = comma;
    }
    out.set(static_cast<std::size_t>(element_from(coords)));
    if (pos < s.size()) {
      if (s[pos] != ',') throw DomainError("set literal: expected ','");
      ++pos;
      if (pos == s.size()) throw DomainError("set literal: trailing ','");
    }
  }
  if (symmetrize) return out | g.negate(out);
  if (!g.is_inverse_closed(out)) throw PreconditionError("set literal is not inverse-closed (use --symmetrize to close it)");
  return out;
}

inline std::string format_element(const AbelianGroup& g, int x) {
  if (g.rank() <= 1) return std::to_string(x);
  std::string out = "(";
  for (int i = 0; i < g.rank(); ++i) {
    if (i) out += ',';
    out += std::to_string(g.coord(x, i));
  }
  return out + ")";
}

inline std::string format_set(const AbelianGroup& g, const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for (int x : members_of(s)) {
    if (!first) out += ',';
    first = false;
    out += format_element(g, x);
  }
  return out + "}";
}

}  // namespace cayleystab
