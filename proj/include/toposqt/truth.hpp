#pragma once

#include "toposqt/dasein.hpp"

namespace toposqt {

// The smallest clopen subobject totally true in psi: the daseinised
// rank-one projector of the state.
struct PseudoState {
  UnitVector psi;
  std::vector<Projector> per_context;  // outer approximation of |psi><psi|
  ClopenSubobject subobject;
};

PseudoState pseudo_state(const ContextPoset& poset, const UnitVector& psi);

// Per-context family of the projections that hold with probability one
// (pure), or with probability at least r (mixed).
class TruthObject {
 public:
  static TruthObject pure(const ContextPoset& poset, UnitVector psi);
  static TruthObject mixed(const ContextPoset& poset, Density rho, Rational r);

  bool is_pure() const { return pure_; }
  const Rational& threshold() const { return r_; }
  // Atom masks of the member projections at context v, ascending.
  const std::vector<AtomMask>& membership(int v) const {
    return member_[static_cast<size_t>(v)];
  }
  bool member(int v, const Projector& p) const;

 private:
  TruthObject() = default;
  const ContextPoset* poset_ = nullptr;
  bool pure_ = false;
  Rational r_;
  std::vector<std::vector<AtomMask>> member_;
};

// v(A in Delta; psi) at stage V through the pseudo-state: the contexts
// below V where the state's projection implies the proposition's.
Sieve truth_value_pseudostate(const ContextPoset& poset, const DaseinisedProposition& prop,
                              const PseudoState& w, int v);

// Same stage value through the truth object membership test.
Sieve truth_value_truthobject(const ContextPoset& poset, const DaseinisedProposition& prop,
                              const TruthObject& t, int v);

// The full Omega element: the stage value at every context at once.
GlobalOmegaElement truth_value_global(const ContextPoset& poset,
                                      const DaseinisedProposition& prop, const PseudoState& w);

struct CovarianceResult {
  Sieve transported;   // l_U image of the original truth value
  Sieve transformed;   // truth value of (UPU*, U psi) at l_U(V)
  bool equal;
};

// Dirac covariance: transporting the truth value along l_U agrees with
// evaluating the conjugated proposition in the transformed state. U must
// map the poset into itself; extend it first with apply_unitary otherwise.
CovarianceResult covariance_check(const ContextPoset& poset, const Projector& prop,
                                  const UnitVector& psi, const Matrix& u, int v);

}  // namespace toposqt
