#include "worb/small_groups.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace worb {

GroupPtr cyclic_group(std::size_t n) {
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Element>((a + b) % n);
  return build_group(t);
}

GroupPtr symmetric_group(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> gens;
  if (n >= 2) {
    std::vector<std::uint32_t> swap(n), cycle(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      swap[i] = i;
      cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
    }
    std::swap(swap[0], swap[1]);
    gens = {swap, cycle};
  }
  return std::make_shared<FiniteGroup const>(FiniteGroup::from_permutations(n, gens, 1u << 20));
}

GroupPtr s3_standard() {
  // images of 1,2,3 (0-based) for e, (12), (13), (23), (123), (132)
  static constexpr std::array<std::array<std::uint32_t, 3>, 6> perms{{
      {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}}};
  std::vector<std::vector<Element>> t(6, std::vector<Element>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<std::uint32_t, 3> c{};
      for (std::size_t i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = static_cast<Element>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return build_group(t);
}

GroupPtr direct_product(FiniteGroup const& a, FiniteGroup const& b) {
  std::size_t na = a.order(), nb = b.order(), n = na * nb;
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      t[x][y] = static_cast<Element>(a.mul(static_cast<Element>(x / nb), static_cast<Element>(y / nb)) * nb +
                                     b.mul(static_cast<Element>(x % nb), static_cast<Element>(y % nb)));
  return build_group(t);
}

}  // namespace worb
