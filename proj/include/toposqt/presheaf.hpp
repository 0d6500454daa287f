#pragma once

#include "toposqt/contexts.hpp"

#include <cstdint>
#include <vector>

namespace toposqt {

// Gel'fand spectrum point of a context: the multiplicative functional that
// sends a projector to 1 exactly when the indexed atom lies under it.
struct SpectralPoint {
  int context;
  int atom;

  bool operator==(const SpectralPoint&) const = default;
};

std::vector<SpectralPoint> spectrum(const ContextPoset& poset, int v);

// lambda |-> lambda restricted to v_sub <= context(p).
SpectralPoint restrict_point(const ContextPoset& poset, SpectralPoint p, int v_sub);

// lambda(P) for P in the point's algebra; 0 or 1.
int evaluate_point(const ContextPoset& poset, SpectralPoint p, const Projector& proj);

using AtomMask = std::uint32_t;

// Per-context subsets of the spectrum, compatible with all restriction
// maps. On a finite poset every subset of the discrete spectrum is clopen,
// so compatibility is the only structural requirement.
class ClopenSubobject {
 public:
  ClopenSubobject(const ContextPoset& poset, std::vector<AtomMask> selection);

  static ClopenSubobject full(const ContextPoset& poset);
  static ClopenSubobject empty(const ContextPoset& poset);

  const ContextPoset& poset() const { return *poset_; }
  AtomMask at(int v) const { return sel_[static_cast<size_t>(v)]; }
  bool contains(SpectralPoint p) const { return at(p.context) & (AtomMask{1} << p.atom); }
  bool is_full() const;
  bool is_empty() const;
  bool operator==(const ClopenSubobject& o) const { return sel_ == o.sel_; }
  bool subset_of(const ClopenSubobject& o) const;

 private:
  const ContextPoset* poset_;
  std::vector<AtomMask> sel_;
};

// Heyting algebra of clopen subobjects.
ClopenSubobject meet(const ClopenSubobject& s, const ClopenSubobject& t);
ClopenSubobject join(const ClopenSubobject& s, const ClopenSubobject& t);
ClopenSubobject implies(const ClopenSubobject& s, const ClopenSubobject& t);
ClopenSubobject heyting_not(const ClopenSubobject& s);

// Downward-closed set of contexts below a root.
class Sieve {
 public:
  Sieve(const ContextPoset& poset, int root, std::vector<char> members);

  static Sieve principal(const ContextPoset& poset, int root);
  static Sieve empty_at(const ContextPoset& poset, int root);
  // Downward closure of the given context set.
  static Sieve generated(const ContextPoset& poset, int root, const std::vector<int>& contexts);

  const ContextPoset& poset() const { return *poset_; }
  int root() const { return root_; }
  bool contains(int v) const { return mem_[static_cast<size_t>(v)] != 0; }
  std::vector<int> members() const;
  bool is_principal() const;
  bool is_empty() const;
  bool operator==(const Sieve& o) const { return root_ == o.root_ && mem_ == o.mem_; }
  bool subset_of(const Sieve& o) const;

 private:
  const ContextPoset* poset_;
  int root_;
  std::vector<char> mem_;
};

// Heyting algebra of sieves on a common root.
Sieve meet(const Sieve& a, const Sieve& b);
Sieve join(const Sieve& a, const Sieve& b);
Sieve implies(const Sieve& a, const Sieve& b);
Sieve heyting_not(const Sieve& a);

// Omega restriction map: the pullback sieve {v'' <= v_sub | v'' in s}.
Sieve omega_restrict(const Sieve& s, int v_sub);

// Sieve-per-context family compatible with Omega's restriction maps.
class GlobalOmegaElement {
 public:
  GlobalOmegaElement(const ContextPoset& poset, std::vector<Sieve> assignment);
  const Sieve& at(int v) const { return sieves_[static_cast<size_t>(v)]; }
  const ContextPoset& poset() const { return *poset_; }

 private:
  const ContextPoset* poset_;
  std::vector<Sieve> sieves_;
};

// Exhaustive enumeration of the compatible point families (global sections
// of the spectral presheaf). Each section maps context index -> atom index.
// Deterministic canonical ordering; empty exactly in the Kochen-Specker
// obstructed case.
std::vector<std::vector<int>> global_sections_sigma(const ContextPoset& poset);

}  // namespace toposqt
