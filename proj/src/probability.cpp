#include "toposqt/probability.hpp"

#include <algorithm>

namespace toposqt {

OrderReversingWeight::OrderReversingWeight(const ContextPoset& poset,
                                           std::vector<Rational> values)
    : poset_(&poset), v_(std::move(values)) {
  if (static_cast<int>(v_.size()) != poset.size())
    fail("PosetMismatch", "weight must cover every context");
  for (const auto& x : v_)
    if (x < 0 || x > 1) fail("ValidationError", "weight value outside [0,1]");
  for (int a = 0; a < poset.size(); ++a)
    for (int b = 0; b < poset.size(); ++b)
      if (a != b && poset.leq(a, b) && v_[static_cast<size_t>(a)] < v_[static_cast<size_t>(b)])
        fail("ValidationError", "weight is not order-reversing between '" + poset.at(a).label +
                                    "' and '" + poset.at(b).label + "'");
}

OrderReversingWeight measure(const ContextPoset& poset, const Density& rho,
                             const ClopenSubobject& s) {
  if (&s.poset() != &poset) fail("PosetMismatch", "subobject lives over a different poset");
  std::vector<Rational> vals(static_cast<size_t>(poset.size()));
  for (int v = 0; v < poset.size(); ++v)
    vals[static_cast<size_t>(v)] = expectation(rho, poset.at(v).atom_sum(s.at(v)).mat());
  return {poset, std::move(vals)};  // ctor asserts order-reversal
}

MeasureAxiomReport check_measure_axioms(const ContextPoset& poset, const MeasureFn& mu,
                                        const std::vector<ClopenSubobject>& samples) {
  MeasureAxiomReport report;
  const OrderReversingWeight unit = mu(ClopenSubobject::full(poset));
  for (int v = 0; v < poset.size(); ++v)
    if (unit.at(v) != 1) report.unit_ok = false;
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i; j < samples.size(); ++j) {
      const OrderReversingWeight lhs_join = mu(join(samples[i], samples[j]));
      const OrderReversingWeight lhs_meet = mu(meet(samples[i], samples[j]));
      const OrderReversingWeight rhs_i = mu(samples[i]);
      const OrderReversingWeight rhs_j = mu(samples[j]);
      for (int v = 0; v < poset.size(); ++v)
        if (lhs_join.at(v) + lhs_meet.at(v) != rhs_i.at(v) + rhs_j.at(v)) {
          report.modular_violations.push_back({i, j, v});
          break;
        }
    }
  return report;
}

std::map<Matrix, Rational> extract_state_weights(const ContextPoset& poset, const MeasureFn& mu) {
  std::map<Matrix, Rational> m;
  for (int v = 0; v < poset.size(); ++v) {
    const Context& c = poset.at(v);
    const AtomMask full = (AtomMask{1} << c.atom_count()) - 1;
    for (AtomMask mask = 0; mask <= full; ++mask) {
      const Projector p = c.atom_sum(mask);
      // Evaluate through the daseinised global subobject of p, whose
      // component at v is exactly p.
      const DaseinisedProposition d = dasein_proj_global(poset, p);
      const Rational value = mu(d.subobject).at(v);
      auto it = m.find(p.mat());
      if (it == m.end()) {
        m.emplace(p.mat(), value);
      } else if (it->second != value) {
        fail("IllDefined", "contexts disagree on the weight of a shared projector at '" +
                               c.label + "' (" + to_string(it->second) + " vs " +
                               to_string(value) + ")");
      }
    }
  }
  // Finite additivity across orthogonal pairs within each context.
  for (int v = 0; v < poset.size(); ++v) {
    const Context& c = poset.at(v);
    const AtomMask full = (AtomMask{1} << c.atom_count()) - 1;
    for (AtomMask a = 0; a <= full; ++a)
      for (AtomMask b = 0; b <= full; ++b) {
        if (a & b) continue;
        const Rational lhs = m.at(c.atom_sum(a | b).mat());
        const Rational rhs = m.at(c.atom_sum(a).mat()) + m.at(c.atom_sum(b).mat());
        if (lhs != rhs)
          fail("IllDefined", "weights are not additive over orthogonal projections in '" +
                                 c.label + "'");
      }
  }
  return m;
}

ProductSieve::ProductSieve(const ContextPoset& poset, int root, Rational r,
                           std::vector<Rational> cutoff)
    : poset_(&poset), root_(root), r_(std::move(r)), cut_(std::move(cutoff)) {
  if (static_cast<int>(cut_.size()) != poset.size())
    fail("PosetMismatch", "cutoff must cover every context");
  if (!(r_ > 0 && r_ <= 1)) fail("BadThreshold", "root threshold must lie in (0,1]");
  for (int v = 0; v < poset.size(); ++v) {
    const Rational& c = cut_[static_cast<size_t>(v)];
    if (c < 0 || c > 1) fail("ValidationError", "cutoff outside [0,1]");
    if (c > 0 && !poset.leq(v, root_))
      fail("ValidationError", "nonzero cutoff outside the down-set of the root");
    if (c > r_) fail("ValidationError", "cutoff exceeds the root threshold");
  }
  // Downward closure in the context coordinate: cutoffs grow downward.
  for (int a = 0; a < poset.size(); ++a)
    for (int b = 0; b < poset.size(); ++b)
      if (a != b && poset.leq(a, b) && poset.leq(b, root_) &&
          cut_[static_cast<size_t>(a)] < cut_[static_cast<size_t>(b)])
        fail("ValidationError", "cutoff is not order-reversing inside the down-set");
}

ProductSieve join(const ProductSieve& a, const ProductSieve& b) {
  if (&a.poset() != &b.poset()) fail("PosetMismatch", "product sieves over different posets");
  if (a.root() != b.root() || a.threshold() != b.threshold())
    fail("RootMismatch", "product sieves have different roots");
  std::vector<Rational> cut(static_cast<size_t>(a.poset().size()));
  for (int v = 0; v < a.poset().size(); ++v)
    cut[static_cast<size_t>(v)] = std::max(a.cutoff(v), b.cutoff(v));
  return {a.poset(), a.root(), a.threshold(), std::move(cut)};
}

ProductSieve l_map(const OrderReversingWeight& gamma, int root, const Rational& r) {
  const ContextPoset& poset = gamma.poset();
  std::vector<Rational> cut(static_cast<size_t>(poset.size()), Rational(0));
  for (int v : poset.down_set(root))
    cut[static_cast<size_t>(v)] = std::min(r, gamma.at(v));
  return {poset, root, r, std::move(cut)};
}

ProductSieve truth_value_probabilistic(const ContextPoset& poset,
                                       const DaseinisedProposition& prop, const Density& rho,
                                       int root, const Rational& r) {
  std::vector<Rational> cut(static_cast<size_t>(poset.size()), Rational(0));
  for (int v : poset.down_set(root)) {
    const Rational tr = expectation(rho, prop.per_context[static_cast<size_t>(v)].mat());
    cut[static_cast<size_t>(v)] = std::min(r, tr);
  }
  ProductSieve direct(poset, root, r, std::move(cut));
  // epsilon(p1* delta(P)) = l(mu_rho(delta(P))): the direct cutoff test and
  // the measure composite must agree exactly.
  const ProductSieve composed = l_map(measure(poset, rho, prop.subobject), root, r);
  if (!(direct == composed))
    fail("ValidationError", "probabilistic truth value disagrees with l after the measure");
  return direct;
}

}  // namespace toposqt
