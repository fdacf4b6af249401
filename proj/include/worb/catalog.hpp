#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "worb/action.hpp"
#include "worb/lattice.hpp"
#include "worb/relations.hpp"

namespace worb {

struct ExpectedProperties {
  std::optional<bool> invariant;
  std::optional<bool> orbital;
  std::optional<bool> weakly_orbital;
  /// Free-form statements about witness shapes, checked by the constructor.
  std::vector<std::string> witness_shapes;
};

/// A named instance: an action, an equivalence relation on it, witnesses
/// and the properties the construction guarantees. Constructors re-check
/// every expected property and throw std::logic_error on a mismatch.
struct InstanceBundle {
  std::string name;
  std::string description;
  GAction action;
  Partition relation;
  std::vector<WitnessPair> witnesses;
  std::optional<AgreeableStructure> structure;
  ExpectedProperties expected;
};

/// Re-checks every expected property and witness flag of `b`; throws
/// std::logic_error on a mismatch.
void verify_bundle(InstanceBundle const& b);

std::vector<std::string> catalog_names();

/// Z/m acting on itself, E the orbits of <d>. Requires d | m.
InstanceBundle cyclic_rotation(std::size_t m, std::size_t d);

/// The rotation group of the icosahedron (A5) on its 12 vertices, E
/// identifying antipodal vertices.
InstanceBundle icosahedron_antipodism();

enum class AffineVariant { MaximalPairs, DisjointUnion };

/// F^3 x| GL3(F) over F_q. Only q = 2 is supported (q = 3 has order
/// 303264); other q throw UnsupportedField.
///
/// Element (v, A) has index vindex(v) * 168 + rank of code(A) among the
/// invertible matrices, where vindex reads v = (v0, v1, v2) as the binary
/// numeral v0 v1 v2 and code(A) reads the entries row by row as a 9-bit
/// numeral with A[0][0] most significant. The product is
/// (v, A)(w, B) = (v + Aw, AB); the line is span(e1), the plane span(e1, e2).
InstanceBundle affine_gl3(std::size_t q, AffineVariant variant);

/// For the disjoint-union affine instance: looks for a witness set meeting
/// each copy in exactly one point, pinning the point of the first copy at
/// the identity. Returns the first witness found.
std::optional<WitnessPair> transversal_witness_search(InstanceBundle const& affine_union);

/// G acting on G x G by left translation of the first coordinate, the
/// point (a, b) at index a*|G| + b; E = R_{H, diagonal}.
InstanceBundle translation_square(GroupPtr group, Subgroup const& h);

/// S3 (indexed e, (12), (13), (23), (123), (132)) acting on S3 x {0..k} by
/// left multiplication, the point (s, n) at index n*6 + s;
/// X~ = {((123), 0)} u {((), n) : n >= 1}, H = <(12)>, E = R_{H,X~}.
InstanceBundle s3_chain(std::size_t k);

/// Builds a catalog instance from its name and integer parameters
/// (defaults where omitted). Throws std::invalid_argument for unknown names.
InstanceBundle build_catalog_instance(std::string const& name, std::vector<std::size_t> const& params);

}  // namespace worb
