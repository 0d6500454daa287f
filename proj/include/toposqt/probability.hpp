#pragma once

#include "toposqt/truth.hpp"

#include <functional>

namespace toposqt {

// Global element of the order-reversing [0,1] presheaf: coarser contexts
// carry values at least as large.
class OrderReversingWeight {
 public:
  OrderReversingWeight(const ContextPoset& poset, std::vector<Rational> values);

  const ContextPoset& poset() const { return *poset_; }
  const Rational& at(int v) const { return v_[static_cast<size_t>(v)]; }
  const std::vector<Rational>& values() const { return v_; }
  bool operator==(const OrderReversingWeight& o) const { return v_ == o.v_; }

 private:
  const ContextPoset* poset_;
  std::vector<Rational> v_;
};

// mu_rho(S): per context the expectation of the selected projection.
OrderReversingWeight measure(const ContextPoset& poset, const Density& rho,
                             const ClopenSubobject& s);

using MeasureFn = std::function<OrderReversingWeight(const ClopenSubobject&)>;

struct MeasureAxiomReport {
  bool unit_ok = true;  // mu(Sigma) = 1 everywhere
  struct ModularViolation {
    size_t first;
    size_t second;
    int context;
  };
  std::vector<ModularViolation> modular_violations;
  bool passed() const { return unit_ok && modular_violations.empty(); }
};

// Checks mu(Sigma) = 1 and mu(SvT) + mu(S^T) = mu(S) + mu(T) over every
// sample pair; violations report the witnessing pair and context.
MeasureAxiomReport check_measure_axioms(const ContextPoset& poset, const MeasureFn& mu,
                                        const std::vector<ClopenSubobject>& samples);

// Collapses a measure to a finitely-additive weight on the projections
// occurring in the poset. Throws IllDefined when two contexts sharing a
// projector disagree, which certifies the input was no measure.
std::map<Matrix, Rational> extract_state_weights(const ContextPoset& poset, const MeasureFn& mu);

// Truth value over pairs <context, threshold>: the fibre over each context
// in the down-set is the rational cutoff (0 encodes the empty fibre).
class ProductSieve {
 public:
  ProductSieve(const ContextPoset& poset, int root, Rational r, std::vector<Rational> cutoff);

  const ContextPoset& poset() const { return *poset_; }
  int root() const { return root_; }
  const Rational& threshold() const { return r_; }
  const Rational& cutoff(int v) const { return cut_[static_cast<size_t>(v)]; }
  bool operator==(const ProductSieve& o) const {
    return root_ == o.root_ && r_ == o.r_ && cut_ == o.cut_;
  }

 private:
  const ContextPoset* poset_;
  int root_;
  Rational r_;
  std::vector<Rational> cut_;  // meaningful on the down-set of root, 0 elsewhere
};

ProductSieve join(const ProductSieve& a, const ProductSieve& b);

// l(gamma)(<V,r>) = {<V',r'> <= <V,r> | gamma(V') >= r'}, encoded by
// cutoff(V') = min(r, gamma(V')).
ProductSieve l_map(const OrderReversingWeight& gamma, int root, const Rational& r);

// v(A in Delta, rho)(<V,r>); computed directly and asserted against the
// composite l(mu_rho(prop)).
ProductSieve truth_value_probabilistic(const ContextPoset& poset,
                                       const DaseinisedProposition& prop, const Density& rho,
                                       int root, const Rational& r);

}  // namespace toposqt
