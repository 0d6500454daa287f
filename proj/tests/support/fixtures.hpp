#pragma once

// Test-only fixtures and independent oracles. Everything here stays exact:
// random rotations are built from Pythagorean triples, so conjugated
// projectors remain Gaussian-rational.

#include "toposqt/probability.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace toposqt::testing {

// ---------------------------------------------------------------------------
// Spin fixture: the dim-4 single-seed poset with P1..P4 and Sz, Sz^2.

struct SpinFixture {
  ContextPoset poset;
  std::vector<Projector> p;  // P1..P4 at indices 0..3
  Hermitian sz;
  Hermitian sz2;

  SpinFixture()
      : p(make_atoms()),
        sz(diag({2, 0, 0, -2})),
        sz2(diag({4, 0, 0, 4})) {
    poset = generate_poset(4, {Seed{"V",
                                    {{"P1", p[0]}, {"P2", p[1]}, {"P3", p[2]}, {"P4", p[3]}}}});
    sz.attach(spectral_resolution(sz));
    sz2.attach(spectral_resolution(sz2));
  }

  static Matrix diag(const std::vector<int>& d) {
    Matrix m(static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = Complex(Rational(d[i]));
    return m;
  }

  static std::vector<Projector> make_atoms() {
    std::vector<Projector> out;
    for (int i = 0; i < 4; ++i) {
      Matrix m(4);
      m.at(i, i) = Complex(Rational(1));
      out.emplace_back(std::move(m));
    }
    return out;
  }

  int ctx(const std::string& label) const { return poset.require_label(label); }

  Projector sum(std::initializer_list<int> idx) const {
    Projector s = Projector::zero(4);
    for (int i : idx) s = s.orthogonal_sum(p[static_cast<size_t>(i)]);
    return s;
  }
};

inline UnitVector basis_state(int dim, int k) {
  Vector v(static_cast<size_t>(dim));
  v[static_cast<size_t>(k)] = Complex(Rational(1));
  return UnitVector(v);
}

// ---------------------------------------------------------------------------
// Exact random generators.

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  int below(int n) { return static_cast<int>(gen() % static_cast<uint64_t>(n)); }
  bool flip() { return (gen() & 1) != 0; }
};

// Pythagorean (cos, sin) pairs: exact points on the unit circle.
inline const std::vector<std::pair<Rational, Rational>>& unit_pairs() {
  static const std::vector<std::pair<Rational, Rational>> pairs = {
      {Rational(3, 5), Rational(4, 5)},
      {Rational(5, 13), Rational(12, 13)},
      {Rational(8, 17), Rational(15, 17)},
      {Rational(7, 25), Rational(24, 25)},
  };
  return pairs;
}

// Product of exact Givens rotations, complex unit phases and transpositions.
inline Matrix random_unitary(Rng& rng, int dim, int steps = 6) {
  Matrix u = Matrix::identity(dim);
  for (int s = 0; s < steps; ++s) {
    const int kind = rng.below(3);
    Matrix g = Matrix::identity(dim);
    if (kind == 0 && dim >= 2) {
      int i = rng.below(dim), j = rng.below(dim);
      if (i == j) j = (j + 1) % dim;
      const auto& [c, sn] = unit_pairs()[static_cast<size_t>(rng.below(static_cast<int>(unit_pairs().size())))];
      g.at(i, i) = Complex(c);
      g.at(j, j) = Complex(c);
      g.at(i, j) = Complex(-sn);
      g.at(j, i) = Complex(sn);
    } else if (kind == 1) {
      const int i = rng.below(dim);
      const auto& [c, sn] = unit_pairs()[static_cast<size_t>(rng.below(static_cast<int>(unit_pairs().size())))];
      g.at(i, i) = Complex(c, rng.flip() ? sn : -sn);
    } else {
      int i = rng.below(dim), j = rng.below(dim);
      if (i != j) {
        g.at(i, i) = Complex(Rational(0));
        g.at(j, j) = Complex(Rational(0));
        g.at(i, j) = Complex(Rational(1));
        g.at(j, i) = Complex(rng.flip() ? Rational(1) : Rational(-1));
      }
    }
    u = g * u;
  }
  return u;
}

inline UnitVector random_state(Rng& rng, int dim) {
  const Matrix u = random_unitary(rng, dim);
  Vector e(static_cast<size_t>(dim));
  e[static_cast<size_t>(rng.below(dim))] = Complex(Rational(1));
  return UnitVector(u.apply(e));
}

inline Density random_density(Rng& rng, int dim, int terms = 2) {
  std::vector<Density::Term> mix;
  std::vector<Rational> weights;
  Rational left = 1;
  for (int t = 0; t < terms - 1; ++t) {
    const Rational w = left * Rational(1 + rng.below(3), 4);
    weights.push_back(w);
    left -= w;
  }
  weights.push_back(left);
  for (const auto& w : weights) mix.push_back({w, random_state(rng, dim)});
  return Density(mix);
}

// Random context: a random partition of a conjugated coordinate basis.
inline Context random_context(Rng& rng, int dim, const Matrix& u) {
  for (;;) {
    std::vector<int> block(static_cast<size_t>(dim));
    int max_block = 0;
    for (int i = 1; i < dim; ++i) {
      block[static_cast<size_t>(i)] = rng.below(max_block + 2);
      max_block = std::max(max_block, block[static_cast<size_t>(i)]);
    }
    if (max_block == 0) continue;  // single block: trivial algebra
    std::vector<std::pair<std::string, Projector>> atoms;
    for (int b = 0; b <= max_block; ++b) {
      Matrix m(dim);
      for (int i = 0; i < dim; ++i)
        if (block[static_cast<size_t>(i)] == b) m.at(i, i) = Complex(Rational(1));
      atoms.emplace_back("B" + std::to_string(b), Projector(u * m * u.adjoint()));
    }
    return context_from_atoms(atoms);
  }
}

// Random valid clopen subobject: random seeds closed downward under the
// restriction maps (the smallest valid subobject containing them).
inline ClopenSubobject random_subobject(Rng& rng, const ContextPoset& poset, int density = 3) {
  std::vector<AtomMask> sel(static_cast<size_t>(poset.size()), 0);
  for (int v = 0; v < poset.size(); ++v)
    for (int a = 0; a < poset.at(v).atom_count(); ++a)
      if (rng.below(density) == 0) sel[static_cast<size_t>(v)] |= AtomMask{1} << a;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < poset.size(); ++v)
      for (int w : poset.down_set(v)) {
        if (w == v) continue;
        for (int a = 0; a < poset.at(v).atom_count(); ++a) {
          if (!(sel[static_cast<size_t>(v)] & (AtomMask{1} << a))) continue;
          const SpectralPoint img = restrict_point(poset, {v, a}, w);
          const AtomMask bit = AtomMask{1} << img.atom;
          if (!(sel[static_cast<size_t>(w)] & bit)) {
            sel[static_cast<size_t>(w)] |= bit;
            changed = true;
          }
        }
      }
  }
  return {poset, std::move(sel)};
}

inline Sieve random_sieve(Rng& rng, const ContextPoset& poset, int root) {
  std::vector<int> gens;
  for (int v : poset.down_set(root))
    if (rng.below(3) == 0) gens.push_back(v);
  return Sieve::generated(poset, root, gens);
}

inline OrderReversingWeight random_weight(Rng& rng, const ContextPoset& poset) {
  std::vector<Rational> vals(static_cast<size_t>(poset.size()));
  for (auto& v : vals) v = Rational(rng.below(9), 8);
  for (int pass = 0; pass < poset.size(); ++pass)
    for (int a = 0; a < poset.size(); ++a)
      for (int b = 0; b < poset.size(); ++b)
        if (a != b && poset.leq(a, b))
          vals[static_cast<size_t>(a)] = std::max(vals[static_cast<size_t>(a)], vals[static_cast<size_t>(b)]);
  return {poset, std::move(vals)};
}

// ---------------------------------------------------------------------------
// Independent oracles.

// Set partitions of {0..n-1} as restricted growth strings.
inline std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  const std::function<void(int, int)> rec = [&](int i, int max_block) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      rgs[static_cast<size_t>(i)] = b;
      rec(i + 1, std::max(max_block, b));
    }
  };
  rec(0, -1);
  return out;
}

// Spectral-family comparison recomputed from resolutions, independent of
// toposqt::spectral_leq.
inline Projector family_at(const SpectralResolution& r, const Rational& x) {
  Projector e = Projector::zero(r.dim());
  for (const auto& pr : r.pairs())
    if (pr.value <= x) e = e.orthogonal_sum(pr.proj);
  return e;
}

inline bool spectral_leq_oracle(const SpectralResolution& a, const SpectralResolution& b) {
  std::vector<Rational> xs;
  for (const auto& pr : a.pairs()) xs.push_back(pr.value);
  for (const auto& pr : b.pairs()) xs.push_back(pr.value);
  for (const auto& x : xs)
    if (!projector_leq(family_at(b, x), family_at(a, x))) return false;
  return true;
}

// Brute-force spectral extrema over the atom-diagonal candidates with
// coefficients drawn from sp(A).
struct CandidateSet {
  std::vector<Matrix> mats;
  std::vector<SpectralResolution> resolutions;
};

inline CandidateSet atom_diagonal_candidates(const Context& v, const std::vector<Rational>& values) {
  CandidateSet out;
  const int k = v.atom_count();
  std::vector<size_t> pick(static_cast<size_t>(k), 0);
  for (;;) {
    Matrix m(v.dim());
    for (int a = 0; a < k; ++a)
      m = m + v.atoms[static_cast<size_t>(a)].mat() * Complex(values[pick[static_cast<size_t>(a)]]);
    std::map<Rational, Matrix> groups;
    for (int a = 0; a < k; ++a) {
      auto it = groups.try_emplace(values[pick[static_cast<size_t>(a)]], Matrix::zero(v.dim())).first;
      it->second = it->second + v.atoms[static_cast<size_t>(a)].mat();
    }
    std::vector<SpectralResolution::Eigenpair> pairs;
    for (auto& [val, proj] : groups) pairs.push_back({val, Projector(std::move(proj))});
    out.mats.push_back(std::move(m));
    out.resolutions.emplace_back(std::move(pairs));
    int i = 0;
    while (i < k && ++pick[static_cast<size_t>(i)] == values.size()) {
      pick[static_cast<size_t>(i)] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return out;
}

// Least candidate spectrally above a (nullopt when none is comparable-least).
inline std::optional<Matrix> brute_outer(const Hermitian& a, const Context& v) {
  const auto values = a.resolution().spectrum();
  const CandidateSet cand = atom_diagonal_candidates(v, values);
  std::vector<size_t> above;
  for (size_t i = 0; i < cand.mats.size(); ++i)
    if (spectral_leq_oracle(a.resolution(), cand.resolutions[i])) above.push_back(i);
  for (size_t i : above) {
    bool least = true;
    for (size_t j : above)
      if (!spectral_leq_oracle(cand.resolutions[i], cand.resolutions[j])) {
        least = false;
        break;
      }
    if (least) return cand.mats[i];
  }
  return std::nullopt;
}

inline std::optional<Matrix> brute_inner(const Hermitian& a, const Context& v) {
  const auto values = a.resolution().spectrum();
  const CandidateSet cand = atom_diagonal_candidates(v, values);
  std::vector<size_t> below;
  for (size_t i = 0; i < cand.mats.size(); ++i)
    if (spectral_leq_oracle(cand.resolutions[i], a.resolution())) below.push_back(i);
  for (size_t i : below) {
    bool greatest = true;
    for (size_t j : below)
      if (!spectral_leq_oracle(cand.resolutions[j], cand.resolutions[i])) {
        greatest = false;
        break;
      }
    if (greatest) return cand.mats[i];
  }
  return std::nullopt;
}

// Random hermitian with spectrum drawn from small integers, conjugated so
// it is not diagonal but stays exactly resolvable.
inline Hermitian random_rational_spectrum_op(Rng& rng, int dim) {
  const Matrix u = random_unitary(rng, dim);
  Matrix d(dim);
  for (int i = 0; i < dim; ++i) d.at(i, i) = Complex(Rational(rng.below(7) - 3));
  Hermitian h(u * d * u.adjoint());
  h.attach(spectral_resolution(h));
  return h;
}

}  // namespace toposqt::testing
