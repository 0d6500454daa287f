#include "toposqt/kochen.hpp"

#include "toposqt/parallel.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

namespace toposqt {
namespace kochen {
namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

std::int64_t dot(const Ray& a, const Ray& b) {
  std::int64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Projector ray_projector(const Ray& v) {
  Vector x;
  x.reserve(v.size());
  for (auto c : v) x.emplace_back(Rational(c));
  return Projector::onto(x);
}

}  // namespace

Ray canonical_ray(Ray v) {
  std::int64_t g = 0;
  for (auto c : v) g = gcd64(g, c);
  if (g == 0) fail("ValidationError", "zero ray");
  for (auto& c : v) c /= g;
  for (auto c : v) {
    if (c > 0) break;
    if (c < 0) {
      for (auto& e : v) e = -e;
      break;
    }
  }
  return v;
}

std::vector<int> BasisSystem::multiplicities() const {
  std::vector<int> mult(rays.size(), 0);
  for (const auto& basis : bases)
    for (int r : basis) ++mult[static_cast<size_t>(r)];
  return mult;
}

BasisSystem make_basis_system(int dim, const std::vector<std::vector<Ray>>& raw_bases) {
  if (raw_bases.empty()) fail("ValidationError", "basis system needs at least one basis");
  BasisSystem sys;
  sys.dim = dim;
  std::map<Ray, int> index;
  std::vector<std::vector<Ray>> canon(raw_bases.size());
  for (size_t b = 0; b < raw_bases.size(); ++b) {
    if (static_cast<int>(raw_bases[b].size()) != dim)
      fail("ValidationError", "basis " + std::to_string(b) + " does not have " +
                                  std::to_string(dim) + " vectors");
    for (const auto& v : raw_bases[b]) {
      if (static_cast<int>(v.size()) != dim)
        fail("DimensionMismatch", "vector length differs from dimension");
      canon[b].push_back(canonical_ray(v));
    }
    for (size_t i = 0; i < canon[b].size(); ++i)
      for (size_t j = i + 1; j < canon[b].size(); ++j)
        if (dot(canon[b][i], canon[b][j]) != 0) {
          std::ostringstream os;
          os << "basis " << b << " vectors " << i << " and " << j << " are not orthogonal";
          fail("NotOrthogonal", os.str());
        }
  }
  // Canonical global ray order, then bases as index tuples.
  std::vector<Ray> all;
  for (const auto& basis : canon)
    for (const auto& v : basis) all.push_back(v);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  sys.rays = all;
  for (size_t i = 0; i < all.size(); ++i) index.emplace(all[i], static_cast<int>(i));
  for (const auto& basis : canon) {
    std::vector<int> idx;
    for (const auto& v : basis) idx.push_back(index.at(v));
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      fail("ValidationError", "repeated ray inside a basis");
    sys.bases.push_back(std::move(idx));
  }
  std::sort(sys.bases.begin(), sys.bases.end());
  return sys;
}

const BasisSystem& kernaghan_system() {
  static const BasisSystem sys = [] {
    const std::vector<std::vector<Ray>> columns = {
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, -1}},
        {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 1}, {0, 1, 0, -1}},
        {{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, -1, 0}},
        {{-1, 1, 1, 1}, {1, -1, 1, 1}, {1, 1, -1, 1}, {1, 1, 1, -1}},
        {{-1, 1, 1, 1}, {1, 1, -1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}},
        {{1, -1, 1, 1}, {1, 1, -1, 1}, {0, 1, 1, 0}, {1, 0, 0, -1}},
        {{1, 1, -1, 1}, {1, 1, 1, -1}, {0, 0, 1, 1}, {1, -1, 0, 0}},
        {{0, 1, -1, 0}, {1, 0, 0, -1}, {1, 1, 1, 1}, {1, -1, -1, 1}},
        {{0, 0, 1, -1}, {1, -1, 0, 0}, {1, 1, 1, 1}, {1, 1, -1, -1}},
        {{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}},
    };
    return make_basis_system(4, columns);
  }();
  return sys;
}

BasisSystem parse_basis_file(std::istream& in) {
  std::vector<std::vector<Ray>> bases;
  std::string line;
  int dim = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Ray> basis;
    size_t pos = 0;
    while ((pos = line.find('(', pos)) != std::string::npos) {
      const size_t close = line.find(')', pos);
      if (close == std::string::npos)
        fail("ParseError", "line " + std::to_string(lineno) + ": unmatched '('");
      std::stringstream cell(line.substr(pos + 1, close - pos - 1));
      Ray v;
      std::string tok;
      while (std::getline(cell, tok, ',')) {
        const auto first = tok.find_first_not_of(" \t");
        const auto last = tok.find_last_not_of(" \t");
        const std::string trimmed =
            first == std::string::npos ? "" : tok.substr(first, last - first + 1);
        try {
          size_t used = 0;
          v.push_back(std::stoll(trimmed, &used));
          if (used != trimmed.size()) throw std::invalid_argument(trimmed);
        } catch (const std::exception&) {
          fail("ParseError", "line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
        }
      }
      if (v.empty()) fail("ParseError", "line " + std::to_string(lineno) + ": empty vector");
      basis.push_back(std::move(v));
      pos = close + 1;
    }
    if (basis.empty())
      fail("ParseError", "line " + std::to_string(lineno) + ": no vectors found");
    if (dim == 0) dim = static_cast<int>(basis.front().size());
    bases.push_back(std::move(basis));
  }
  if (bases.empty()) fail("ParseError", "no bases in input");
  return make_basis_system(dim, bases);
}

bool ParityCertificate::applies() const {
  if (basis_count % 2 == 0) return false;
  return std::all_of(multiplicities.begin(), multiplicities.end(),
                     [](int m) { return m % 2 == 0; });
}

namespace {

// DFS over rays in canonical order, trying black (0) before white (1), so
// the first full assignment found is the lexicographically least coloring.
// Unit propagation closes bases that are fully black but for one ray and
// prunes bases that already hold a white ray.
class Search {
 public:
  explicit Search(const BasisSystem& sys)
      : sys_(sys), color_(sys.rays.size(), -1), ray_bases_(sys.rays.size()) {
    for (size_t b = 0; b < sys.bases.size(); ++b)
      for (int idx : sys_.bases[b]) ray_bases_[static_cast<size_t>(idx)].push_back(static_cast<int>(b));
  }

  std::optional<Coloring> first_solution() { return run(/*count_all=*/false, 1) > 0 ? found_ : std::nullopt; }

  std::int64_t count(std::int64_t cap) { return run(true, cap); }

 private:
  std::int64_t run(bool count_all, std::int64_t cap) {
    solutions_ = 0;
    cap_ = cap;
    count_all_ = count_all;
    dfs(0);
    return solutions_;
  }

  bool basis_feasible(int b) const {
    int whites = 0;
    int open = 0;
    for (int r : sys_.bases[static_cast<size_t>(b)]) {
      const int c = color_[static_cast<size_t>(r)];
      if (c == 1) ++whites;
      if (c == -1) ++open;
    }
    if (whites > 1) return false;
    if (whites == 0 && open == 0) return false;
    return true;
  }

  void dfs(size_t r) {
    if (solutions_ >= cap_) return;
    if (r == color_.size()) {
      for (size_t b = 0; b < sys_.bases.size(); ++b) {
        int whites = 0;
        for (int idx : sys_.bases[b]) whites += color_[static_cast<size_t>(idx)] == 1;
        if (whites != 1) return;
      }
      ++solutions_;
      if (!found_) found_ = Coloring{color_};
      return;
    }
    for (int c : {0, 1}) {
      color_[r] = c;
      bool ok = true;
      for (int b : ray_bases_[r])
        if (!basis_feasible(b)) {
          ok = false;
          break;
        }
      if (ok) {
        dfs(r + 1);
        if (!count_all_ && solutions_ > 0) {
          color_[r] = -1;
          return;
        }
      }
      color_[r] = -1;
      if (solutions_ >= cap_) return;
    }
  }

  const BasisSystem& sys_;
  std::vector<int> color_;
  std::vector<std::vector<int>> ray_bases_;
  std::optional<Coloring> found_;
  std::int64_t solutions_ = 0;
  std::int64_t cap_ = 1;
  bool count_all_ = false;
};

}  // namespace

KsResult ks_colorable(const BasisSystem& sys) {
  KsResult result;
  ParityCertificate cert{sys.multiplicities(), static_cast<int>(sys.bases.size())};
  if (cert.applies()) result.certificate = cert;
  Search search(sys);
  result.coloring = search.first_solution();
  // The counting argument and the exhaustive search must never disagree.
  if (result.coloring && result.certificate)
    fail("ValidationError", "parity certificate contradicts an explicit coloring");
  return result;
}

std::int64_t count_colorings(const BasisSystem& sys, std::int64_t cap) {
  Search search(sys);
  return search.count(cap);
}

ContextPoset poset_from_system(const BasisSystem& sys) {
  std::vector<Seed> seeds;
  std::vector<std::string> ray_names(sys.rays.size());
  const int width = sys.rays.size() > 9 ? 2 : 1;
  for (size_t r = 0; r < sys.rays.size(); ++r) {
    std::ostringstream os;
    os << "r";
    os.width(width);
    os.fill('0');
    os << r;
    ray_names[r] = os.str();
  }
  for (size_t b = 0; b < sys.bases.size(); ++b) {
    Seed seed;
    std::string joined;
    for (int r : sys.bases[b]) joined += ray_names[static_cast<size_t>(r)];
    seed.name = "V_{" + joined + "}";
    for (int r : sys.bases[b])
      seed.atoms.emplace_back(ray_names[static_cast<size_t>(r)],
                              ray_projector(sys.rays[static_cast<size_t>(r)]));
    seeds.push_back(std::move(seed));
  }
  return generate_poset(sys.dim, seeds);
}

FuncReport func_check(const std::vector<int>& valuation, const BasisSystem& sys) {
  if (valuation.size() != sys.rays.size())
    fail("ValidationError", "valuation must cover every ray");
  FuncReport report;
  for (size_t r = 0; r < valuation.size(); ++r)
    if (valuation[r] != 0 && valuation[r] != 1) report.range_violations.push_back(static_cast<int>(r));
  for (size_t b = 0; b < sys.bases.size(); ++b) {
    int sum = 0;
    for (int r : sys.bases[b]) sum += valuation[static_cast<size_t>(r)];
    if (sum != 1) report.sum_rule_violations.push_back(static_cast<int>(b));
  }
  return report;
}

}  // namespace kochen
}  // namespace toposqt
