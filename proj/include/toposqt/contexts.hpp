#pragma once

#include "toposqt/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toposqt {

// Abelian context: a resolution of the identity into at least two
// pairwise-orthogonal atoms, canonically ordered. The trivial algebra C*1
// is rejected at construction.
struct Context {
  std::vector<Projector> atoms;       // descending canonical key order
  std::vector<std::string> atom_names;  // aligned with atoms; for reports
  std::string label;

  int dim() const { return atoms.front().dim(); }
  int atom_count() const { return static_cast<int>(atoms.size()); }

  // Identity is the canonical atom set; labels are cosmetic.
  bool same_algebra(const Context& o) const;
  std::strong_ordering operator<=>(const Context& o) const;

  // Index of the unique atom dominating `a`, if `a` lies under one.
  std::optional<int> dominating_atom(const Projector& a) const;
  // Membership of P in the context's projection lattice: P is an exact sum
  // of atoms. Returns the atom index set when it is.
  std::optional<std::vector<int>> decompose(const Projector& p) const;
  Projector atom_sum(uint32_t mask) const;
  // A = sum c_a * a over atoms; nullopt when A is not in the algebra.
  std::optional<std::vector<Rational>> coefficients(const Matrix& a) const;
};

Context context_from_atoms(const std::vector<std::pair<std::string, Projector>>& atoms,
                           const std::string& label = "");

// Seed basis for poset generation: a named resolution of the identity.
struct Seed {
  std::string name;
  std::vector<std::pair<std::string, Projector>> atoms;
};

struct UnitaryAction;

// Finite fragment of V(H): the contexts generated by the seeds, closed
// under coarsening of the atom partition, ordered by algebra inclusion.
class ContextPoset {
 public:
  ContextPoset() = default;

  int size() const { return static_cast<int>(ctxs_.size()); }
  const Context& at(int i) const { return ctxs_[static_cast<size_t>(i)]; }
  bool leq(int a, int b) const { return leq_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  bool is_maximal(int i) const { return maximal_[static_cast<size_t>(i)]; }

  std::optional<int> find(const Context& c) const;
  std::optional<int> find_label(const std::string& label) const;
  int require_label(const std::string& label) const;  // UnknownContext

  // Precomputed restriction: the atom of `sub` dominating atom `a` of
  // `super`; requires leq(sub, super).
  int restrict_atom(int super, int sub, int a) const;

  // All v' <= v including v, ascending index order.
  std::vector<int> down_set(int v) const;
  std::vector<int> maximal_contexts() const;
  // Greatest common lower bound when it exists.
  std::optional<int> meet(int a, int b) const;

  std::string dot(const std::vector<int>& highlight = {}) const;

  friend ContextPoset generate_poset(int dim, const std::vector<Seed>& seeds);
  friend UnitaryAction apply_unitary(const ContextPoset& poset, const Matrix& u,
                                     const std::string& g_label, bool extend);

 private:
  std::vector<Context> ctxs_;
  std::vector<std::vector<bool>> leq_;
  std::vector<bool> maximal_;
  std::map<std::vector<Matrix>, int> index_;  // canonical atom key -> index
  std::vector<std::vector<std::vector<int>>> restr_;  // [super][sub][atom] -> atom

  void finalize();  // sorts, dedups already done; computes leq + maximal
};

ContextPoset generate_poset(int dim, const std::vector<Seed>& seeds);

struct UnitaryAction {
  ContextPoset poset;          // original or extended
  std::vector<int> image;      // old index -> index of U V U* in `poset`
  bool extended = false;
};

// V -> U V U*. Images must lie in the poset unless extend is set, in which
// case the poset is enlarged by the conjugated contexts.
UnitaryAction apply_unitary(const ContextPoset& poset, const Matrix& u,
                            const std::string& g_label, bool extend = false);

}  // namespace toposqt
