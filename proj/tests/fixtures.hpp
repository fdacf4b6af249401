#pragma once

// Instances shared by the unit tests and the acceptance runner.

#include <string>

#include "worb/lattice.hpp"
#include "worb/small_groups.hpp"

namespace fixture {

/// S3 on the three cosets of <(12)>.
inline worb::GAction s3_on_three() {
  auto s3 = worb::s3_standard();
  worb::Element t12[] = {0, 1};
  return worb::coset_action(s3, worb::Subgroup::from_elements(*s3, t12));
}

/// The discrete structure on `a` with the X x X points p and q glued into a
/// single irreducible, the (X^2)^2 lattice rebuilt from the glued one.
inline worb::AgreeableStructure glued_structure(worb::GAction const& a, std::size_t p, std::size_t q) {
  std::size_t n2 = a.domain_size() * a.domain_size();
  std::vector<worb::Bitset> gens;
  for (std::size_t i = 0; i < n2; ++i)
    if (i != p && i != q) {
      gens.emplace_back(n2);
      gens.back().set(i);
    }
  gens.emplace_back(n2);
  gens.back().set(p).set(q);
  auto xxx = worb::SetLattice::from_union_generators(n2, gens);
  worb::LatticeOverrides o;
  o.XxX = xxx;
  o.X2xX2 = worb::product_lattice(xxx, xxx);
  return worb::make_structure(a, worb::SetLattice::discrete(a.group().order()),
                              worb::SetLattice::discrete(a.domain_size()), o);
}

/// Failing axioms as a string of digits, e.g. "256".
inline std::string failing_axioms(worb::AgreeabilityReport const& r) {
  std::string out;
  for (auto const& ax : r.axioms)
    if (!ax.holds) out += static_cast<char>('0' + ax.axiom);
  return out;
}

}  // namespace fixture
