#pragma once

#include "toposqt/contexts.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace toposqt {
namespace kochen {

// Rays are primitive integer vectors with positive leading entry, so sign
// and scale variants of the same direction collapse to one ray.
using Ray = std::vector<std::int64_t>;

Ray canonical_ray(Ray v);

struct BasisSystem {
  int dim = 0;
  std::vector<Ray> rays;                 // deduplicated, canonical order
  std::vector<std::vector<int>> bases;   // ray indices, each of size dim
  std::vector<int> multiplicities() const;
};

// Validates pairwise orthogonality and spanning of every basis.
BasisSystem make_basis_system(int dim, const std::vector<std::vector<Ray>>& raw_bases);

// Built-in 11-basis obstruction system in dimension 4; its construction is
// self-checked (orthogonality of every basis column).
const BasisSystem& kernaghan_system();

// One basis per line, vectors as comma-separated integers in parentheses:
//   (1,0,0,0) (0,1,0,0) (0,0,1,1) (0,0,1,-1)
BasisSystem parse_basis_file(std::istream& in);

struct Coloring {
  std::vector<int> assignment;  // 0/1 per ray, canonical order
};

// Sound refutation by counting: if every ray occurs an even number of
// times while the basis count is odd, no coloring can pick exactly one
// white ray per basis.
struct ParityCertificate {
  std::vector<int> multiplicities;
  int basis_count = 0;
  bool applies() const;
};

struct KsResult {
  std::optional<Coloring> coloring;            // lexicographically least, if any
  std::optional<ParityCertificate> certificate;  // set when it applies
};

// Exhaustive backtracking with unit propagation over the bases; the
// returned witness is schedule-independent.
KsResult ks_colorable(const BasisSystem& sys);

// Number of valid colorings, counted up to `cap`.
std::int64_t count_colorings(const BasisSystem& sys, std::int64_t cap = 1 << 20);

// Seeds one context per basis from its rank-one projectors.
ContextPoset poset_from_system(const BasisSystem& sys);

struct FuncReport {
  std::vector<int> sum_rule_violations;   // bases with sum of values != 1
  std::vector<int> range_violations;      // rays valued outside {0,1}
  bool empty() const { return sum_rule_violations.empty() && range_violations.empty(); }
};

// Checks a total valuation on the rays against the per-basis sum rule and
// the {0,1} range that idempotence forces.
FuncReport func_check(const std::vector<int>& valuation, const BasisSystem& sys);

}  // namespace kochen
}  // namespace toposqt
