#include "toposqt/presheaf.hpp"

#include "toposqt/parallel.hpp"

#include <algorithm>
#include <functional>

namespace toposqt {
namespace {

void require_same_poset(const ContextPoset* a, const ContextPoset* b) {
  if (a != b) fail("PosetMismatch", "operands live over different context posets");
}

AtomMask full_mask(const Context& c) {
  return (AtomMask{1} << c.atom_count()) - 1;
}

}  // namespace

std::vector<SpectralPoint> spectrum(const ContextPoset& poset, int v) {
  std::vector<SpectralPoint> pts;
  for (int a = 0; a < poset.at(v).atom_count(); ++a) pts.push_back({v, a});
  return pts;
}

SpectralPoint restrict_point(const ContextPoset& poset, SpectralPoint p, int v_sub) {
  return {v_sub, poset.restrict_atom(p.context, v_sub, p.atom)};
}

int evaluate_point(const ContextPoset& poset, SpectralPoint p, const Projector& proj) {
  const Context& c = poset.at(p.context);
  const auto idx = c.decompose(proj);
  if (!idx)
    fail("NotInAlgebra", "projector is not a sum of atoms of '" + c.label + "'");
  for (int i : *idx)
    if (i == p.atom) return 1;
  return 0;
}

ClopenSubobject::ClopenSubobject(const ContextPoset& poset, std::vector<AtomMask> selection)
    : poset_(&poset), sel_(std::move(selection)) {
  if (static_cast<int>(sel_.size()) != poset.size())
    fail("PosetMismatch", "selection must cover every context");
  for (int v = 0; v < poset.size(); ++v)
    if (sel_[static_cast<size_t>(v)] & ~full_mask(poset.at(v)))
      fail("ValidationError", "atom index out of range at '" + poset.at(v).label + "'");
  // Restriction compatibility: image of the selection at v lands inside the
  // selection at every v' <= v.
  for (int v = 0; v < poset.size(); ++v)
    for (int w = 0; w < poset.size(); ++w) {
      if (w == v || !poset.leq(w, v)) continue;
      for (int a = 0; a < poset.at(v).atom_count(); ++a) {
        if (!(sel_[static_cast<size_t>(v)] & (AtomMask{1} << a))) continue;
        const SpectralPoint img = restrict_point(poset, {v, a}, w);
        if (!(sel_[static_cast<size_t>(w)] & (AtomMask{1} << img.atom)))
          fail("ValidationError", "selection is not restriction-compatible from '" +
                                      poset.at(v).label + "' to '" + poset.at(w).label + "'");
      }
    }
}

ClopenSubobject ClopenSubobject::full(const ContextPoset& poset) {
  std::vector<AtomMask> sel(static_cast<size_t>(poset.size()));
  for (int v = 0; v < poset.size(); ++v) sel[static_cast<size_t>(v)] = full_mask(poset.at(v));
  return {poset, std::move(sel)};
}

ClopenSubobject ClopenSubobject::empty(const ContextPoset& poset) {
  return {poset, std::vector<AtomMask>(static_cast<size_t>(poset.size()), 0)};
}

bool ClopenSubobject::is_full() const {
  for (int v = 0; v < poset_->size(); ++v)
    if (at(v) != full_mask(poset_->at(v))) return false;
  return true;
}

bool ClopenSubobject::is_empty() const {
  return std::all_of(sel_.begin(), sel_.end(), [](AtomMask m) { return m == 0; });
}

bool ClopenSubobject::subset_of(const ClopenSubobject& o) const {
  require_same_poset(poset_, o.poset_);
  for (size_t v = 0; v < sel_.size(); ++v)
    if (sel_[v] & ~o.sel_[v]) return false;
  return true;
}

ClopenSubobject meet(const ClopenSubobject& s, const ClopenSubobject& t) {
  require_same_poset(&s.poset(), &t.poset());
  std::vector<AtomMask> sel(static_cast<size_t>(s.poset().size()));
  for (int v = 0; v < s.poset().size(); ++v) sel[static_cast<size_t>(v)] = s.at(v) & t.at(v);
  return {s.poset(), std::move(sel)};
}

ClopenSubobject join(const ClopenSubobject& s, const ClopenSubobject& t) {
  require_same_poset(&s.poset(), &t.poset());
  std::vector<AtomMask> sel(static_cast<size_t>(s.poset().size()));
  for (int v = 0; v < s.poset().size(); ++v) sel[static_cast<size_t>(v)] = s.at(v) | t.at(v);
  return {s.poset(), std::move(sel)};
}

ClopenSubobject implies(const ClopenSubobject& s, const ClopenSubobject& t) {
  require_same_poset(&s.poset(), &t.poset());
  const ContextPoset& poset = s.poset();
  // (S => T)(v) keeps the points whose every restriction that lands in S
  // lands in T as well. The down-set is finite, so the quantifier is exact.
  std::vector<AtomMask> sel(static_cast<size_t>(poset.size()), 0);
  for (int v = 0; v < poset.size(); ++v) {
    for (int a = 0; a < poset.at(v).atom_count(); ++a) {
      bool keep = true;
      for (int w : poset.down_set(v)) {
        const SpectralPoint img = restrict_point(poset, {v, a}, w);
        if (s.contains(img) && !t.contains(img)) {
          keep = false;
          break;
        }
      }
      if (keep) sel[static_cast<size_t>(v)] |= AtomMask{1} << a;
    }
  }
  return {poset, std::move(sel)};
}

ClopenSubobject heyting_not(const ClopenSubobject& s) {
  return implies(s, ClopenSubobject::empty(s.poset()));
}

Sieve::Sieve(const ContextPoset& poset, int root, std::vector<char> members)
    : poset_(&poset), root_(root), mem_(std::move(members)) {
  if (static_cast<int>(mem_.size()) != poset.size())
    fail("PosetMismatch", "sieve membership must cover every context");
  for (int v = 0; v < poset.size(); ++v) {
    if (!contains(v)) continue;
    if (!poset.leq(v, root_))
      fail("ValidationError", "sieve member '" + poset.at(v).label + "' is not below the root");
    for (int w = 0; w < poset.size(); ++w)
      if (poset.leq(w, v) && !contains(w))
        fail("ValidationError", "sieve is not downward closed at '" + poset.at(w).label + "'");
  }
}

Sieve Sieve::principal(const ContextPoset& poset, int root) {
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int v : poset.down_set(root)) mem[static_cast<size_t>(v)] = 1;
  return {poset, root, std::move(mem)};
}

Sieve Sieve::empty_at(const ContextPoset& poset, int root) {
  return {poset, root, std::vector<char>(static_cast<size_t>(poset.size()), 0)};
}

Sieve Sieve::generated(const ContextPoset& poset, int root, const std::vector<int>& contexts) {
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int v : contexts) {
    if (!poset.leq(v, root))
      fail("ValidationError", "generator '" + poset.at(v).label + "' is not below the root");
    for (int w : poset.down_set(v)) mem[static_cast<size_t>(w)] = 1;
  }
  return {poset, root, std::move(mem)};
}

std::vector<int> Sieve::members() const {
  std::vector<int> out;
  for (int v = 0; v < poset_->size(); ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

bool Sieve::is_principal() const { return contains(root_); }

bool Sieve::is_empty() const {
  return std::all_of(mem_.begin(), mem_.end(), [](char c) { return c == 0; });
}

bool Sieve::subset_of(const Sieve& o) const {
  require_same_poset(poset_, o.poset_);
  for (size_t v = 0; v < mem_.size(); ++v)
    if (mem_[v] && !o.mem_[v]) return false;
  return true;
}

namespace {
void require_same_root(const Sieve& a, const Sieve& b) {
  require_same_poset(&a.poset(), &b.poset());
  if (a.root() != b.root()) fail("RootMismatch", "sieves have different roots");
}
}  // namespace

Sieve meet(const Sieve& a, const Sieve& b) {
  require_same_root(a, b);
  std::vector<char> mem(static_cast<size_t>(a.poset().size()), 0);
  for (int v = 0; v < a.poset().size(); ++v) mem[static_cast<size_t>(v)] = a.contains(v) && b.contains(v);
  return {a.poset(), a.root(), std::move(mem)};
}

Sieve join(const Sieve& a, const Sieve& b) {
  require_same_root(a, b);
  std::vector<char> mem(static_cast<size_t>(a.poset().size()), 0);
  for (int v = 0; v < a.poset().size(); ++v) mem[static_cast<size_t>(v)] = a.contains(v) || b.contains(v);
  return {a.poset(), a.root(), std::move(mem)};
}

Sieve implies(const Sieve& a, const Sieve& b) {
  require_same_root(a, b);
  const ContextPoset& poset = a.poset();
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int v : poset.down_set(a.root())) {
    bool keep = true;
    for (int w : poset.down_set(v))
      if (a.contains(w) && !b.contains(w)) {
        keep = false;
        break;
      }
    mem[static_cast<size_t>(v)] = keep;
  }
  return {poset, a.root(), std::move(mem)};
}

Sieve heyting_not(const Sieve& a) { return implies(a, Sieve::empty_at(a.poset(), a.root())); }

Sieve omega_restrict(const Sieve& s, int v_sub) {
  const ContextPoset& poset = s.poset();
  if (!poset.leq(v_sub, s.root()))
    fail("NotSubcontext", "'" + poset.at(v_sub).label + "' is not below the sieve root");
  std::vector<char> mem(static_cast<size_t>(poset.size()), 0);
  for (int v : poset.down_set(v_sub)) mem[static_cast<size_t>(v)] = s.contains(v);
  return {poset, v_sub, std::move(mem)};
}

GlobalOmegaElement::GlobalOmegaElement(const ContextPoset& poset, std::vector<Sieve> assignment)
    : poset_(&poset), sieves_(std::move(assignment)) {
  if (static_cast<int>(sieves_.size()) != poset.size())
    fail("PosetMismatch", "assignment must cover every context");
  for (int v = 0; v < poset.size(); ++v) {
    if (sieves_[static_cast<size_t>(v)].root() != v)
      fail("ValidationError", "assignment at '" + poset.at(v).label + "' has the wrong root");
    for (int w : poset.down_set(v))
      if (!(omega_restrict(sieves_[static_cast<size_t>(v)], w) == sieves_[static_cast<size_t>(w)]))
        fail("ValidationError", "assignment is not compatible with Omega restriction from '" +
                                    poset.at(v).label + "' to '" + poset.at(w).label + "'");
  }
}

std::vector<std::vector<int>> global_sections_sigma(const ContextPoset& poset) {
  const std::vector<int> maxima = poset.maximal_contexts();
  const int m = static_cast<int>(maxima.size());

  // A section is determined by one atom choice per maximal context; the
  // choices must restrict identically to every common sub-context.
  std::vector<std::vector<int>> sections;
  if (m == 0) return sections;

  // Deterministic parallel split over the first maximal context's atoms.
  const int branches = poset.at(maxima[0]).atom_count();
  std::vector<std::vector<std::vector<int>>> per_branch(static_cast<size_t>(branches));
  parallel_for(branches, [&](int b) {
    std::vector<int> local_choice(static_cast<size_t>(m), -1);
    std::function<void(int)> walk = [&](int i) {
      if (i == m) {
        std::vector<int> section(static_cast<size_t>(poset.size()), -1);
        for (int k = 0; k < m; ++k) {
          const int mv = maxima[static_cast<size_t>(k)];
          for (int w : poset.down_set(mv)) {
            const SpectralPoint p =
                restrict_point(poset, {mv, local_choice[static_cast<size_t>(k)]}, w);
            section[static_cast<size_t>(w)] = p.atom;
          }
        }
        per_branch[static_cast<size_t>(b)].push_back(std::move(section));
        return;
      }
      const int mv = maxima[static_cast<size_t>(i)];
      const int lo = (i == 0) ? b : 0;
      const int hi = (i == 0) ? b + 1 : poset.at(mv).atom_count();
      for (int a = lo; a < hi; ++a) {
        bool ok = true;
        for (int j = 0; j < i && ok; ++j) {
          const int mw = maxima[static_cast<size_t>(j)];
          for (int w = 0; w < poset.size() && ok; ++w) {
            if (!poset.leq(w, mv) || !poset.leq(w, mw)) continue;
            const SpectralPoint pa = restrict_point(poset, {mv, a}, w);
            const SpectralPoint pb =
                restrict_point(poset, {mw, local_choice[static_cast<size_t>(j)]}, w);
            ok = pa.atom == pb.atom;
          }
        }
        if (!ok) continue;
        local_choice[static_cast<size_t>(i)] = a;
        walk(i + 1);
        local_choice[static_cast<size_t>(i)] = -1;
      }
    };
    walk(0);
  });
  for (auto& chunk : per_branch)
    for (auto& s : chunk) sections.push_back(std::move(s));
  return sections;
}

}  // namespace toposqt
