#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace worb {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

inline Bitset make_bitset(std::size_t n, std::span<std::uint32_t const> indices) {
  Bitset b(n);
  for (auto i : indices) b.set(i);
  return b;
}

inline Bitset full_bitset(std::size_t n) {
  Bitset b(n);
  b.set();
  return b;
}

inline std::vector<std::uint32_t> indices_of(Bitset const& b) {
  std::vector<std::uint32_t> out;
  out.reserve(b.count());
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i))
    out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

/// Orders sets by cardinality, then by their sorted index lists.
inline bool canonical_less(Bitset const& a, Bitset const& b) {
  auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  auto i = a.find_first(), j = b.find_first();
  while (i != Bitset::npos && j != Bitset::npos) {
    if (i != j) return i < j;
    i = a.find_next(i);
    j = b.find_next(j);
  }
  return false;
}

}  // namespace worb
