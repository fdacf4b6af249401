#pragma once

#include <cstddef>

#include "worb/group.hpp"

namespace worb {

/// Z/n with element k standing for k mod n.
GroupPtr cyclic_group(std::size_t n);

/// Sym(n) on {0..n-1}, indexed as by FiniteGroup::from_permutations.
GroupPtr symmetric_group(std::size_t n);

/// S3 with the fixed indexing e, (12), (13), (23), (123), (132).
GroupPtr s3_standard();

/// A x B with the pair (a, b) at index a*|B| + b.
GroupPtr direct_product(FiniteGroup const& a, FiniteGroup const& b);

}  // namespace worb
