#pragma once

#include "toposqt/presheaf.hpp"

#include <map>

namespace toposqt {

// Outer approximation of P inside V: the least projection of V above P.
Projector dasein_outer_proj(const Projector& p, const Context& v);
// Inner approximation: the greatest projection of V below P.
Projector dasein_inner_proj(const Projector& p, const Context& v);

// Proposition assembled across the whole poset: per-context outer
// approximations together with the induced clopen subobject.
struct DaseinisedProposition {
  Projector source;
  std::vector<Projector> per_context;  // aligned with poset indices
  ClopenSubobject subobject;
};

DaseinisedProposition dasein_proj_global(const ContextPoset& poset, const Projector& p);

// Returns (outer(1-P) at V, 1 - inner(P) at V); the two agree.
std::pair<Projector, Projector> dasein_negation_check(const Projector& p, const Context& v);

// Self-adjoint approximation through the spectral order: the spectral
// family of the outer approximation is the inner approximation of the
// family, and dually. Results carry their resolutions.
Hermitian dasein_outer_sa(const Hermitian& a, const Context& v);
Hermitian dasein_inner_sa(const Hermitian& a, const Context& v);

// Restriction map of the outer (resp. inner) operator presheaf. Requires
// a to lie in the source algebra.
Hermitian de_groote_outer(const Hermitian& a, const Context& from, const Context& to);
Hermitian de_groote_inner(const Hermitian& a, const Context& from, const Context& to);

// Nested value intervals of a quantity at a spectrum point: mu climbs with
// the context, nu falls, and every value sits in sp(A).
struct ValueInterval {
  int root;
  std::map<int, std::pair<Rational, Rational>> at;  // context -> (mu, nu) over the down-set
};

ValueInterval breve_delta(const ContextPoset& poset, const Hermitian& a, SpectralPoint p);

// Gel'fand transform of an algebra element at an atom of its context.
Rational algebra_value_at_atom(const Context& v, const Matrix& m, int atom);

}  // namespace toposqt
