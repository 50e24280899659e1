#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace cayleystab {

/// Subset of an indexed point set (group elements, vertices, ...).
using ElementSet = boost::dynamic_bitset<std::uint64_t>;

inline ElementSet make_set(std::size_t n, const std::vector<int>& members) {
  ElementSet s(n);
  for (int m : members) s.set(static_cast<std::size_t>(m));
  return s;
}

inline std::vector<int> members_of(const ElementSet& s) {
  std::vector<int> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

/// Hex rendering with element 0 as the least significant bit.
inline std::string to_hex(const ElementSet& s) {
  static constexpr char kDigits[] = "0123456789abcdef";
  if (s.size() == 0) return "0";
  std::string out;
  const std::size_t nibbles = (s.size() + 3) / 4;
  for (std::size_t k = nibbles; k-- > 0;) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t bit = 4 * k + b;
      if (bit < s.size() && s.test(bit)) v |= 1u << b;
    }
    out.push_back(kDigits[v]);
  }
  const auto first = out.find_first_not_of('0');
  return first == std::string::npos ? "0" : out.substr(first);
}

}  // namespace cayleystab
