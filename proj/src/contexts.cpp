#include "toposqt/contexts.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace toposqt {
namespace {

std::vector<Matrix> atom_key(const std::vector<Projector>& atoms) {
  std::vector<Matrix> key;
  key.reserve(atoms.size());
  for (const auto& a : atoms) key.push_back(a.mat());
  return key;
}

// Enumerates set partitions of {0..n-1} as restricted growth strings.
void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int max_block) {
    if (i == n) {
      fn(rgs);
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      rgs[static_cast<size_t>(i)] = b;
      rec(i + 1, std::max(max_block, b));
    }
  };
  rec(0, -1);
}

}  // namespace

bool Context::same_algebra(const Context& o) const { return atoms == o.atoms; }

std::strong_ordering Context::operator<=>(const Context& o) const {
  if (atoms.size() != o.atoms.size())
    return atoms.size() < o.atoms.size() ? std::strong_ordering::less
                                         : std::strong_ordering::greater;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const auto c = atoms[i] <=> o.atoms[i];
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

std::optional<int> Context::dominating_atom(const Projector& a) const {
  for (size_t i = 0; i < atoms.size(); ++i)
    if (projector_leq(a, atoms[i])) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<std::vector<int>> Context::decompose(const Projector& p) const {
  std::vector<int> idx;
  Matrix sum = Matrix::zero(dim());
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].mat() * p.mat()).is_zero()) {
      idx.push_back(static_cast<int>(i));
      sum = sum + atoms[i].mat();
    }
  }
  if (sum != p.mat()) return std::nullopt;
  return idx;
}

Projector Context::atom_sum(uint32_t mask) const {
  Projector p = Projector::zero(dim());
  for (size_t i = 0; i < atoms.size(); ++i)
    if (mask & (1u << i)) p = p.orthogonal_sum(atoms[i]);
  return p;
}

std::optional<std::vector<Rational>> Context::coefficients(const Matrix& a) const {
  std::vector<Rational> cs;
  Matrix sum = Matrix::zero(dim());
  for (const auto& atom : atoms) {
    const Matrix prod = a * atom.mat();
    // Find the scalar c with A*atom = c*atom.
    Complex c;
    for (int i = 0; i < dim() && c.is_zero(); ++i)
      for (int j = 0; j < dim(); ++j)
        if (!atom.mat().at(i, j).is_zero()) {
          c = prod.at(i, j) / atom.mat().at(i, j);
          break;
        }
    if (prod != atom.mat() * c || !c.is_real()) return std::nullopt;
    cs.push_back(c.re);
    sum = sum + atom.mat() * c;
  }
  if (sum != a) return std::nullopt;
  return cs;
}

Context context_from_atoms(const std::vector<std::pair<std::string, Projector>>& named,
                           const std::string& label) {
  if (named.empty()) fail("NotResolution", "context needs at least one atom");
  const int d = named.front().second.dim();
  if (named.size() < 2)
    fail("TrivialContext", "the minimal algebra C*1 is excluded; give at least two atoms");
  Matrix sum = Matrix::zero(d);
  for (size_t i = 0; i < named.size(); ++i) {
    if (named[i].second.dim() != d) fail("DimensionMismatch", "mixed atom dimensions");
    if (named[i].second.is_zero()) fail("NotResolution", "zero atom in context");
    for (size_t j = i + 1; j < named.size(); ++j)
      if (!named[i].second.orthogonal_to(named[j].second))
        fail("NotOrthogonal",
             "atoms '" + named[i].first + "' and '" + named[j].first + "' are not orthogonal");
    sum = sum + named[i].second.mat();
  }
  if (sum != Matrix::identity(d))
    fail("NotResolution", "atoms do not sum to the identity");

  Context c;
  std::vector<std::pair<Projector, std::string>> sorted;
  sorted.reserve(named.size());
  for (const auto& [name, p] : named) sorted.emplace_back(p, name);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [p, name] : sorted) {
    c.atoms.push_back(std::move(p));
    c.atom_names.push_back(std::move(name));
  }
  if (!label.empty()) {
    c.label = label;
  } else {
    std::string joined;
    for (size_t i = 0; i < c.atom_names.size(); ++i)
      joined += (i ? "|" : "") + c.atom_names[i];
    c.label = "V_{" + joined + "}";
  }
  return c;
}

std::optional<int> ContextPoset::find(const Context& c) const {
  auto it = index_.find(atom_key(c.atoms));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> ContextPoset::find_label(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (ctxs_[static_cast<size_t>(i)].label == label) return i;
  return std::nullopt;
}

int ContextPoset::require_label(const std::string& label) const {
  if (auto i = find_label(label)) return *i;
  fail("UnknownContext", "no context labelled '" + label + "' in the poset");
}

std::vector<int> ContextPoset::down_set(int v) const {
  if (v < 0 || v >= size()) fail("UnknownContext", "context index out of range");
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (leq(i, v)) out.push_back(i);
  return out;
}

std::vector<int> ContextPoset::maximal_contexts() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (maximal_[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

std::optional<int> ContextPoset::meet(int a, int b) const {
  std::vector<int> lower;
  for (int i = 0; i < size(); ++i)
    if (leq(i, a) && leq(i, b)) lower.push_back(i);
  for (int cand : lower) {
    bool greatest = true;
    for (int other : lower)
      if (!leq(other, cand)) {
        greatest = false;
        break;
      }
    if (greatest) return cand;
  }
  return std::nullopt;
}

void ContextPoset::finalize() {
  const size_t n = ctxs_.size();
  leq_.assign(n, std::vector<bool>(n, false));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b) {
        leq_[a][b] = true;
        continue;
      }
      // a <= b iff every atom of a is an exact sum of atoms of b.
      bool ok = ctxs_[a].atoms.size() <= ctxs_[b].atoms.size();
      for (size_t i = 0; ok && i < ctxs_[a].atoms.size(); ++i)
        ok = ctxs_[b].decompose(ctxs_[a].atoms[i]).has_value();
      leq_[a][b] = ok;
    }
  maximal_.assign(n, true);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (a != b && leq_[a][b]) maximal_[a] = false;
  restr_.assign(n, std::vector<std::vector<int>>(n));
  for (size_t sup = 0; sup < n; ++sup)
    for (size_t sub = 0; sub < n; ++sub) {
      if (!leq_[sub][sup]) continue;
      auto& table = restr_[sup][sub];
      table.resize(ctxs_[sup].atoms.size());
      for (size_t a = 0; a < ctxs_[sup].atoms.size(); ++a) {
        const auto dom = ctxs_[sub].dominating_atom(ctxs_[sup].atoms[a]);
        if (!dom) fail("ValidationError", "inclusion without atom domination");
        table[a] = *dom;
      }
    }
}

int ContextPoset::restrict_atom(int super, int sub, int a) const {
  const auto& table = restr_[static_cast<size_t>(super)][static_cast<size_t>(sub)];
  if (table.empty()) fail("NotSubcontext", "'" + at(sub).label + "' is not below '" +
                                               at(super).label + "'");
  return table[static_cast<size_t>(a)];
}

ContextPoset generate_poset(int dim, const std::vector<Seed>& seeds) {
  if (seeds.empty()) fail("ValidationError", "poset generation needs at least one seed");
  std::vector<Context> pool;
  std::map<std::vector<Matrix>, size_t> seen;

  for (const auto& seed : seeds) {
    const Context base = context_from_atoms(seed.atoms, seed.name);
    const int k = static_cast<int>(seed.atoms.size());
    for_each_partition(k, [&](const std::vector<int>& rgs) {
      const int blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
      if (blocks < 2) return;  // trivial algebra, excluded
      std::vector<std::pair<std::string, Projector>> block_atoms;
      std::vector<std::string> singleton_names;
      for (int b = 0; b < blocks; ++b) {
        std::string name;
        std::optional<Projector> sum;
        int members = 0;
        for (int i = 0; i < k; ++i) {
          if (rgs[static_cast<size_t>(i)] != b) continue;
          ++members;
          name += (name.empty() ? "" : "+") + seed.atoms[static_cast<size_t>(i)].first;
          sum = sum ? sum->orthogonal_sum(seed.atoms[static_cast<size_t>(i)].second)
                    : seed.atoms[static_cast<size_t>(i)].second;
        }
        if (members == 1) singleton_names.push_back(name);
        block_atoms.emplace_back(name, *sum);
      }
      std::string label;
      if (blocks == k) {
        label = seed.name;
      } else if (blocks == static_cast<int>(singleton_names.size()) + 1) {
        // Singletons plus the one remaining block determine the context.
        std::string joined;
        for (const auto& s : singleton_names) joined += s;
        label = "V_{" + joined + "}";
      } else {
        std::string joined;
        for (size_t i = 0; i < block_atoms.size(); ++i)
          joined += (i ? "|" : "") + block_atoms[i].first;
        label = "V_{" + joined + "}";
      }
      Context c = context_from_atoms(block_atoms, label);
      const auto key = atom_key(c.atoms);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, pool.size());
        pool.push_back(std::move(c));
      } else if (c.label < pool[it->second].label) {
        pool[it->second].label = c.label;
        pool[it->second].atom_names = c.atom_names;
      }
    });
  }

  for (const auto& c : pool)
    if (c.dim() != dim)
      fail("DimensionMismatch", "seed dimension differs from requested poset dimension");

  ContextPoset poset;
  std::sort(pool.begin(), pool.end());
  poset.ctxs_ = std::move(pool);
  for (size_t i = 0; i < poset.ctxs_.size(); ++i)
    poset.index_.emplace(atom_key(poset.ctxs_[i].atoms), static_cast<int>(i));
  poset.finalize();
  return poset;
}

UnitaryAction apply_unitary(const ContextPoset& poset, const Matrix& u,
                            const std::string& g_label, bool extend) {
  if (!u.is_unitary()) fail("NotUnitary", "U*U != 1 for " + u.str());
  const Matrix udag = u.adjoint();

  std::vector<Context> images;
  images.reserve(static_cast<size_t>(poset.size()));
  for (int v = 0; v < poset.size(); ++v) {
    const Context& c = poset.at(v);
    std::vector<std::pair<std::string, Projector>> conj;
    for (size_t i = 0; i < c.atoms.size(); ++i)
      conj.emplace_back(c.atom_names[i], Projector(u * c.atoms[i].mat() * udag));
    images.push_back(context_from_atoms(conj, g_label + "(" + c.label + ")"));
  }

  UnitaryAction act;
  std::vector<int> missing;
  for (int v = 0; v < poset.size(); ++v)
    if (!poset.find(images[static_cast<size_t>(v)]))
      missing.push_back(v);

  if (missing.empty()) {
    act.poset = poset;
    act.image.resize(static_cast<size_t>(poset.size()));
    for (int v = 0; v < poset.size(); ++v)
      act.image[static_cast<size_t>(v)] = *poset.find(images[static_cast<size_t>(v)]);
    return act;
  }
  if (!extend)
    fail("ImageOutsidePoset", "conjugate of '" + poset.at(missing.front()).label +
                                  "' is not a poset member (pass extend to enlarge)");

  act.extended = true;
  ContextPoset merged;
  std::vector<Context> pool;
  std::map<std::vector<Matrix>, size_t> seen;
  auto add = [&](const Context& c) {
    const auto key = atom_key(c.atoms);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, pool.size());
      pool.push_back(c);
    } else if (c.label < pool[it->second].label) {
      pool[it->second].label = c.label;
      pool[it->second].atom_names = c.atom_names;
    }
  };
  for (int v = 0; v < poset.size(); ++v) add(poset.at(v));
  for (const auto& img : images) add(img);
  std::sort(pool.begin(), pool.end());
  merged.ctxs_ = std::move(pool);
  for (size_t i = 0; i < merged.ctxs_.size(); ++i)
    merged.index_.emplace(atom_key(merged.ctxs_[i].atoms), static_cast<int>(i));
  merged.finalize();

  act.image.resize(static_cast<size_t>(poset.size()));
  for (int v = 0; v < poset.size(); ++v)
    act.image[static_cast<size_t>(v)] = *merged.find(images[static_cast<size_t>(v)]);
  act.poset = std::move(merged);
  return act;
}

std::string ContextPoset::dot(const std::vector<int>& highlight) const {
  std::vector<bool> mark(static_cast<size_t>(size()), false);
  for (int h : highlight) mark[static_cast<size_t>(h)] = true;
  std::ostringstream os;
  os << "digraph contexts {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (int i = 0; i < size(); ++i) {
    os << "  \"" << at(i).label << "\"";
    std::vector<std::string> attrs;
    if (is_maximal(i)) attrs.push_back("penwidth=2");
    if (mark[static_cast<size_t>(i)]) attrs.push_back("style=filled, fillcolor=lightblue");
    if (!attrs.empty()) {
      os << " [";
      for (size_t k = 0; k < attrs.size(); ++k) os << (k ? ", " : "") << attrs[k];
      os << "]";
    }
    os << ";\n";
  }
  // Covering relations only.
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b) {
      if (a == b || !leq(a, b)) continue;
      bool covering = true;
      for (int c = 0; c < size() && covering; ++c)
        if (c != a && c != b && leq(a, c) && leq(c, b)) covering = false;
      if (covering) os << "  \"" << at(a).label << "\" -> \"" << at(b).label << "\";\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace toposqt
