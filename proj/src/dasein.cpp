#include "toposqt/dasein.hpp"

#include "toposqt/parallel.hpp"

#include <functional>

namespace toposqt {
namespace {

void require_dim(const Projector& p, const Context& v) {
  if (p.dim() != v.dim()) fail("DimensionMismatch", "projector/context dimensions differ");
}

}  // namespace

Projector dasein_outer_proj(const Projector& p, const Context& v) {
  require_dim(p, v);
  Projector out = Projector::zero(v.dim());
  for (const auto& atom : v.atoms)
    if (!(atom.mat() * p.mat()).is_zero()) out = out.orthogonal_sum(atom);
  return out;
}

Projector dasein_inner_proj(const Projector& p, const Context& v) {
  require_dim(p, v);
  Projector out = Projector::zero(v.dim());
  for (const auto& atom : v.atoms)
    if (projector_leq(atom, p)) out = out.orthogonal_sum(atom);
  return out;
}

DaseinisedProposition dasein_proj_global(const ContextPoset& poset, const Projector& p) {
  std::vector<Projector> per(static_cast<size_t>(poset.size()), Projector::zero(p.dim()));
  std::vector<AtomMask> sel(static_cast<size_t>(poset.size()), 0);
  parallel_for(poset.size(), [&](int v) {
    const Context& c = poset.at(v);
    const Projector d = dasein_outer_proj(p, c);
    AtomMask mask = 0;
    for (int a = 0; a < c.atom_count(); ++a)
      if (projector_leq(c.atoms[static_cast<size_t>(a)], d)) mask |= AtomMask{1} << a;
    per[static_cast<size_t>(v)] = d;
    sel[static_cast<size_t>(v)] = mask;
  });
  // The subobject constructor re-validates restriction compatibility, which
  // holds by monotonicity of the outer approximation.
  return {p, std::move(per), ClopenSubobject(poset, std::move(sel))};
}

std::pair<Projector, Projector> dasein_negation_check(const Projector& p, const Context& v) {
  const Projector lhs = dasein_outer_proj(p.complement(), v);
  const Projector rhs = dasein_inner_proj(p, v).complement();
  return {lhs, rhs};
}

namespace {

// Shared scaffolding: daseinise each spectral-family step through `approx`,
// then rebuild the operator from the jumps of the new family.
Hermitian rebuild_from_family(
    const SpectralFamily& fam, const Context& v,
    const std::function<Projector(const Projector&, const Context&)>& approx) {
  std::vector<SpectralFamily::Step> steps;
  for (const auto& s : fam.steps()) steps.push_back({s.threshold, approx(s.below, v)});
  const SpectralFamily approximated(std::move(steps));
  const SpectralResolution res = resolution_from_family(approximated);
  return {res.reconstruct(), res};
}

}  // namespace

Hermitian dasein_outer_sa(const Hermitian& a, const Context& v) {
  if (a.dim() != v.dim()) fail("DimensionMismatch", "operator/context dimensions differ");
  return rebuild_from_family(spectral_family(a.resolution()), v, dasein_inner_proj);
}

Hermitian dasein_inner_sa(const Hermitian& a, const Context& v) {
  if (a.dim() != v.dim()) fail("DimensionMismatch", "operator/context dimensions differ");
  // inf over mu > lambda of outer(E_mu) equals outer(E_lambda) at every
  // eigenvalue breakpoint: the family is constant to the right of each.
  return rebuild_from_family(spectral_family(a.resolution()), v, dasein_outer_proj);
}

namespace {

Hermitian de_groote(const Hermitian& a, const Context& from, const Context& to, bool outer) {
  if (!from.coefficients(a.mat()))
    fail("NotInAlgebra", "operator does not belong to '" + from.label + "'");
  Hermitian resolved = a;
  if (!resolved.resolved()) resolved.attach(spectral_resolution(resolved));
  return outer ? dasein_outer_sa(resolved, to) : dasein_inner_sa(resolved, to);
}

}  // namespace

Hermitian de_groote_outer(const Hermitian& a, const Context& from, const Context& to) {
  return de_groote(a, from, to, true);
}

Hermitian de_groote_inner(const Hermitian& a, const Context& from, const Context& to) {
  return de_groote(a, from, to, false);
}

Rational algebra_value_at_atom(const Context& v, const Matrix& m, int atom) {
  const auto cs = v.coefficients(m);
  if (!cs) fail("NotInAlgebra", "operator does not belong to '" + v.label + "'");
  return (*cs)[static_cast<size_t>(atom)];
}

ValueInterval breve_delta(const ContextPoset& poset, const Hermitian& a, SpectralPoint p) {
  ValueInterval out;
  out.root = p.context;
  for (int w : poset.down_set(p.context)) {
    const Context& c = poset.at(w);
    const SpectralPoint q = restrict_point(poset, p, w);
    const Hermitian lo = dasein_inner_sa(a, c);
    const Hermitian hi = dasein_outer_sa(a, c);
    const Rational mu = algebra_value_at_atom(c, lo.mat(), q.atom);
    const Rational nu = algebra_value_at_atom(c, hi.mat(), q.atom);
    if (mu > nu) fail("ValidationError", "value interval inverted at '" + c.label + "'");
    out.at.emplace(w, std::make_pair(mu, nu));
  }
  return out;
}

}  // namespace toposqt
