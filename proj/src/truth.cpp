#include "toposqt/truth.hpp"

#include "toposqt/parallel.hpp"

#include <algorithm>
#include <functional>

namespace toposqt {

PseudoState pseudo_state(const ContextPoset& poset, const UnitVector& psi) {
  const DaseinisedProposition d = dasein_proj_global(poset, psi.projector());
  return {psi, d.per_context, d.subobject};
}

namespace {

constexpr int kMaxAtomsForMembership = 6;

std::vector<std::vector<AtomMask>> materialize_membership(
    const ContextPoset& poset, const std::function<bool(int, AtomMask)>& admits) {
  std::vector<std::vector<AtomMask>> out(static_cast<size_t>(poset.size()));
  parallel_for(poset.size(), [&](int v) {
    const int k = poset.at(v).atom_count();
    if (k > kMaxAtomsForMembership)
      fail("ValidationError", "context '" + poset.at(v).label +
                                  "' has too many atoms to materialise its projection lattice");
    for (AtomMask m = 0; m < (AtomMask{1} << k); ++m)
      if (admits(v, m)) out[static_cast<size_t>(v)].push_back(m);
  });
  return out;
}

}  // namespace

TruthObject TruthObject::pure(const ContextPoset& poset, UnitVector psi) {
  TruthObject t;
  t.poset_ = &poset;
  t.pure_ = true;
  t.r_ = 1;
  t.member_ = materialize_membership(poset, [&](int v, AtomMask m) {
    const Projector alpha = poset.at(v).atom_sum(m);
    return expectation(psi, alpha.mat()) == 1;
  });
  return t;
}

TruthObject TruthObject::mixed(const ContextPoset& poset, Density rho, Rational r) {
  if (!(r > 0 && r <= 1)) fail("BadThreshold", "threshold must lie in (0,1], got " + to_string(r));
  TruthObject t;
  t.poset_ = &poset;
  t.pure_ = false;
  t.r_ = r;
  t.member_ = materialize_membership(poset, [&](int v, AtomMask m) {
    const Projector alpha = poset.at(v).atom_sum(m);
    return expectation(rho, alpha.mat()) >= r;
  });
  return t;
}

bool TruthObject::member(int v, const Projector& p) const {
  const auto idx = poset_->at(v).decompose(p);
  if (!idx) fail("NotInAlgebra", "projector is not in '" + poset_->at(v).label + "'");
  AtomMask m = 0;
  for (int i : *idx) m |= AtomMask{1} << i;
  const auto& ms = member_[static_cast<size_t>(v)];
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

Sieve truth_value_pseudostate(const ContextPoset& poset, const DaseinisedProposition& prop,
                              const PseudoState& w, int v) {
  if (static_cast<int>(prop.per_context.size()) != poset.size() ||
      static_cast<int>(w.per_context.size()) != poset.size())
    fail("PosetMismatch", "proposition and state must be assembled over this poset");
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int u : poset.down_set(v)) {
    const bool truth = projector_leq(w.per_context[static_cast<size_t>(u)],
                                     prop.per_context[static_cast<size_t>(u)]);
#ifndef NDEBUG
    // The projector inequality and the expectation condition coincide.
    const bool by_expectation =
        expectation(w.psi, prop.per_context[static_cast<size_t>(u)].mat()) == 1;
    if (truth != by_expectation)
      fail("ValidationError", "pseudo-state routes disagree at '" + poset.at(u).label + "'");
#endif
    mem[static_cast<size_t>(u)] = truth;
  }
  return {poset, v, std::move(mem)};  // ctor asserts downward closure
}

Sieve truth_value_truthobject(const ContextPoset& poset, const DaseinisedProposition& prop,
                              const TruthObject& t, int v) {
  if (static_cast<int>(prop.per_context.size()) != poset.size())
    fail("PosetMismatch", "proposition must be assembled over this poset");
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int u : poset.down_set(v))
    mem[static_cast<size_t>(u)] = t.member(u, prop.per_context[static_cast<size_t>(u)]);
  return {poset, v, std::move(mem)};
}

GlobalOmegaElement truth_value_global(const ContextPoset& poset,
                                      const DaseinisedProposition& prop, const PseudoState& w) {
  std::vector<Sieve> sieves;
  sieves.reserve(static_cast<size_t>(poset.size()));
  for (int v = 0; v < poset.size(); ++v)
    sieves.push_back(truth_value_pseudostate(poset, prop, w, v));
  return {poset, std::move(sieves)};  // ctor asserts Omega compatibility
}

CovarianceResult covariance_check(const ContextPoset& poset, const Projector& prop,
                                  const UnitVector& psi, const Matrix& u, int v) {
  const UnitaryAction act = apply_unitary(poset, u, "g", /*extend=*/false);

  const DaseinisedProposition d_orig = dasein_proj_global(poset, prop);
  const PseudoState w_orig = pseudo_state(poset, psi);
  const Sieve original = truth_value_pseudostate(poset, d_orig, w_orig, v);

  // Transport the sieve along l_U.
  std::vector<char> mapped(static_cast<size_t>(poset.size()), 0);
  for (int w = 0; w < poset.size(); ++w)
    if (original.contains(w)) mapped[static_cast<size_t>(act.image[static_cast<size_t>(w)])] = 1;
  const int v_mapped = act.image[static_cast<size_t>(v)];
  Sieve transported(poset, v_mapped, std::move(mapped));

  const Projector prop_u(u * prop.mat() * u.adjoint());
  const UnitVector psi_u(u.apply(psi.vec()));
  const DaseinisedProposition d_u = dasein_proj_global(poset, prop_u);
  const PseudoState w_u = pseudo_state(poset, psi_u);
  Sieve transformed = truth_value_pseudostate(poset, d_u, w_u, v_mapped);

  const bool equal = transported == transformed;
  return {std::move(transported), std::move(transformed), equal};
}

}  // namespace toposqt
