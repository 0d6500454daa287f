#include "toposqt/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace toposqt {
namespace {

std::string entry_name(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b)
    fail("DimensionMismatch",
         std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

Complex Complex::operator/(const Complex& o) const {
  if (o.is_zero()) fail("DivisionByZero", "complex division by zero");
  const Rational n = o.re * o.re + o.im * o.im;
  return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
}

std::string Complex::str() const {
  if (im == 0) return to_string(re);
  std::ostringstream os;
  os << to_string(re) << (im > 0 ? "+" : "") << to_string(im) << "i";
  return os.str();
}

Complex inner(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) fail("DimensionMismatch", "inner product of unequal vectors");
  Complex s;
  for (size_t i = 0; i < x.size(); ++i) s = s + x[i].conj() * y[i];
  return s;
}

Matrix::Matrix(int dim, std::vector<Complex> entries) : dim_(dim), a_(std::move(entries)) {
  if (a_.size() != static_cast<size_t>(dim) * dim)
    fail("DimensionMismatch", "matrix entry count does not match dimension");
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = Complex(Rational(1));
  return m;
}

Matrix Matrix::outer(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) fail("DimensionMismatch", "outer product of unequal vectors");
  Matrix m(static_cast<int>(x.size()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) m.at(i, j) = x[i] * y[j].conj();
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_dim(dim_, o.dim_, "matrix sum");
  Matrix r(dim_);
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_dim(dim_, o.dim_, "matrix difference");
  Matrix r(dim_);
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_same_dim(dim_, o.dim_, "matrix product");
  Matrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const Complex& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < dim_; ++j) r.at(i, j) = r.at(i, j) + aik * o.at(k, j);
    }
  return r;
}

Matrix Matrix::operator*(const Complex& c) const {
  Matrix r(dim_);
  for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
  return r;
}

Vector Matrix::apply(const Vector& v) const {
  if (static_cast<int>(v.size()) != dim_) fail("DimensionMismatch", "matrix-vector product");
  Vector r(v.size());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r[i] = r[i] + at(i, j) * v[j];
  return r;
}

Matrix Matrix::adjoint() const {
  Matrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(i, j) = at(j, i).conj();
  return r;
}

Complex Matrix::trace() const {
  Complex t;
  for (int i = 0; i < dim_; ++i) t = t + at(i, i);
  return t;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Complex& c) { return c.is_zero(); });
}

std::optional<std::pair<int, int>> Matrix::hermitian_defect() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      if (at(i, j) != at(j, i).conj()) return std::make_pair(i, j);
  return std::nullopt;
}

bool Matrix::is_hermitian() const { return !hermitian_defect().has_value(); }

std::optional<std::pair<int, int>> Matrix::idempotent_defect() const {
  const Matrix sq = *this * *this;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (sq.at(i, j) != at(i, j)) return std::make_pair(i, j);
  return std::nullopt;
}

bool Matrix::is_unitary() const { return adjoint() * *this == identity(dim_); }

bool Matrix::is_diagonal() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && !at(i, j).is_zero()) return false;
  return true;
}

std::strong_ordering Matrix::operator<=>(const Matrix& o) const {
  if (dim_ != o.dim_)
    return dim_ < o.dim_ ? std::strong_ordering::less : std::strong_ordering::greater;
  for (size_t k = 0; k < a_.size(); ++k) {
    const auto c = a_[k] <=> o.a_[k];
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < dim_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < dim_; ++j) {
      if (j) os << ",";
      os << at(i, j).str();
    }
  }
  os << "]";
  return os.str();
}

Projector::Projector(Matrix m) : m_(std::move(m)) {
  if (auto d = m_.hermitian_defect())
    fail("NotHermitian", "entry " + entry_name(d->first, d->second) +
                             " breaks M = M* in " + m_.str());
  if (auto d = m_.idempotent_defect())
    fail("NotIdempotent", "entry " + entry_name(d->first, d->second) +
                              " breaks M*M = M in " + m_.str());
}

Projector Projector::zero(int dim) { return Projector(Matrix::zero(dim), Unchecked{}); }
Projector Projector::one(int dim) { return Projector(Matrix::identity(dim), Unchecked{}); }

Projector Projector::onto(const Vector& v) {
  const Complex n = inner(v, v);
  if (n.is_zero()) fail("ZeroVector", "cannot project onto the zero vector");
  Matrix m = Matrix::outer(v, v);
  return Projector(m * (Complex(Rational(1)) / n));
}

int Projector::rank() const {
  const Complex t = m_.trace();
  // Trace of a projector is its rank; exact by construction.
  return static_cast<int>(numerator(t.re));
}

bool Projector::orthogonal_to(const Projector& q) const { return (m_ * q.mat()).is_zero(); }

Projector Projector::orthogonal_sum(const Projector& q) const {
  if (!orthogonal_to(q)) fail("NotOrthogonal", "sum of non-orthogonal projectors");
  return Projector(m_ + q.mat(), Unchecked{});
}

Projector Projector::complement() const {
  return Projector(Matrix::identity(dim()) - m_, Unchecked{});
}

bool projector_leq(const Projector& p, const Projector& q) {
  require_same_dim(p.dim(), q.dim(), "projector order");
  return p.mat() * q.mat() == p.mat();
}

SpectralResolution::SpectralResolution(std::vector<Eigenpair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) fail("InvalidHint", "empty spectral resolution");
  const int d = pairs_.front().proj.dim();
  Matrix sum = Matrix::zero(d);
  for (size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].proj.dim() != d) fail("DimensionMismatch", "mixed dimensions in resolution");
    if (pairs_[i].proj.is_zero()) fail("InvalidHint", "zero projector in resolution");
    if (i + 1 < pairs_.size() && !(pairs_[i].value < pairs_[i + 1].value))
      fail("InvalidHint", "eigenvalues must be strictly increasing");
    for (size_t j = i + 1; j < pairs_.size(); ++j)
      if (!pairs_[i].proj.orthogonal_to(pairs_[j].proj))
        fail("InvalidHint", "eigenprojectors are not pairwise orthogonal");
    sum = sum + pairs_[i].proj.mat();
  }
  if (sum != Matrix::identity(d)) fail("InvalidHint", "eigenprojectors do not sum to the identity");
}

std::vector<Rational> SpectralResolution::spectrum() const {
  std::vector<Rational> s;
  s.reserve(pairs_.size());
  for (const auto& p : pairs_) s.push_back(p.value);
  return s;
}

Matrix SpectralResolution::reconstruct() const {
  Matrix m = Matrix::zero(dim());
  for (const auto& p : pairs_) m = m + p.proj.mat() * Complex(p.value);
  return m;
}

bool SpectralResolution::operator==(const SpectralResolution& o) const {
  if (pairs_.size() != o.pairs_.size()) return false;
  for (size_t i = 0; i < pairs_.size(); ++i)
    if (pairs_[i].value != o.pairs_[i].value || pairs_[i].proj != o.pairs_[i].proj) return false;
  return true;
}

SpectralFamily::SpectralFamily(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) fail("InvalidHint", "empty spectral family");
  const int d = steps_.front().below.dim();
  for (size_t i = 0; i + 1 < steps_.size(); ++i) {
    if (!(steps_[i].threshold < steps_[i + 1].threshold))
      fail("InvalidHint", "family thresholds must be strictly increasing");
    if (!projector_leq(steps_[i].below, steps_[i + 1].below))
      fail("InvalidHint", "spectral family is not monotone");
  }
  if (steps_.back().below != Projector::one(d))
    fail("InvalidHint", "spectral family must end at the identity");
}

Projector SpectralFamily::at(const Rational& lambda) const {
  Projector e = Projector::zero(dim());
  for (const auto& s : steps_) {
    if (s.threshold <= lambda) e = s.below;
    else break;
  }
  return e;
}

SpectralFamily spectral_family(const SpectralResolution& r) {
  std::vector<SpectralFamily::Step> steps;
  Projector acc = Projector::zero(r.dim());
  for (const auto& p : r.pairs()) {
    acc = acc.orthogonal_sum(p.proj);
    steps.push_back({p.value, acc});
  }
  return SpectralFamily(std::move(steps));
}

SpectralResolution resolution_from_family(const SpectralFamily& f) {
  std::vector<SpectralResolution::Eigenpair> pairs;
  Projector prev = Projector::zero(f.dim());
  for (const auto& s : f.steps()) {
    const Matrix jump = s.below.mat() - prev.mat();
    if (!jump.is_zero()) pairs.push_back({s.threshold, Projector(jump)});
    prev = s.below;
  }
  return SpectralResolution(std::move(pairs));
}

Hermitian::Hermitian(Matrix m) : m_(std::move(m)) {
  if (auto d = m_.hermitian_defect())
    fail("NotHermitian",
         "entry " + entry_name(d->first, d->second) + " breaks M = M* in " + m_.str());
}

Hermitian::Hermitian(Matrix m, SpectralResolution r) : Hermitian(std::move(m)) {
  attach(std::move(r));
}

const SpectralResolution& Hermitian::resolution() const {
  if (!res_) fail("NotResolved", "operator has no attached spectral resolution");
  return *res_;
}

void Hermitian::attach(SpectralResolution r) {
  if (r.reconstruct() != m_)
    fail("InvalidHint", "resolution does not reconstruct the operator");
  res_ = std::move(r);
}

namespace {

// Polynomials over Q, coefficient vector by ascending degree.
using Poly = std::vector<Rational>;

Poly poly_trim(Poly p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {Rational(0)};
  Poly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(static_cast<int>(i));
  return d;
}

// Euclidean remainder of a by b (b nonzero).
Poly poly_mod(Poly a, const Poly& b) {
  a = poly_trim(std::move(a));
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    const Rational q = a.back() / b.back();
    const size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
    a = poly_trim(std::move(a));
    if (a.size() == 1 && a[0] == 0) break;
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!(b.size() == 1 && b[0] == 0)) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  // Monic normalisation.
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

Poly poly_divide_exact(const Poly& a, const Poly& b) {
  Poly rem = a;
  Poly quot(a.size() - b.size() + 1, Rational(0));
  for (size_t k = a.size(); k >= b.size(); --k) {
    const size_t deg = k - 1;
    const Rational q = rem[deg] / b.back();
    quot[deg - (b.size() - 1)] = q;
    const size_t shift = deg - (b.size() - 1);
    for (size_t i = 0; i < b.size(); ++i) rem[i + shift] -= q * b[i];
  }
  return poly_trim(quot);
}

Rational poly_eval(const Poly& p, const Rational& x) {
  Rational v = 0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

// Characteristic polynomial via Faddeev-LeVerrier; coefficients are real
// for hermitian input (asserted).
Poly char_poly(const Matrix& a) {
  const int n = a.dim();
  Matrix m = Matrix::zero(n);
  std::vector<Rational> c(static_cast<size_t>(n) + 1);
  c[n] = 1;
  Matrix prev = Matrix::zero(n);
  Rational ck = 1;
  for (int k = 1; k <= n; ++k) {
    m = a * (prev + Matrix::identity(n) * Complex(ck));
    const Complex t = m.trace();
    if (!t.is_real()) fail("NotHermitian", "characteristic polynomial has complex coefficients");
    ck = -t.re / k;
    c[n - k] = ck;
    prev = m;
  }
  return c;
}

std::vector<Integer> divisors_bounded(Integer n, size_t cap) {
  std::vector<Integer> out;
  if (n < 0) n = -n;
  if (n == 0) return out;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
      if (out.size() > cap) return {};  // give up, too many candidates
    }
  }
  return out;
}

// All rational roots of a squarefree polynomial with rational coefficients,
// or nullopt when the candidate search cannot complete.
std::optional<std::vector<Rational>> rational_roots(Poly p) {
  p = poly_trim(std::move(p));
  std::vector<Rational> roots;
  // Deflate roots at zero first.
  while (p.size() > 1 && p[0] == 0) {
    roots.push_back(Rational(0));
    p.erase(p.begin());
  }
  while (p.size() > 1) {
    // Clear denominators to an integer polynomial.
    Integer lcm = 1;
    for (const auto& c : p) {
      const Integer d = denominator(c);
      lcm = lcm / gcd(lcm, d) * d;
    }
    std::vector<Integer> ip(p.size());
    for (size_t i = 0; i < p.size(); ++i)
      ip[i] = numerator(p[i] * Rational(lcm));
    const auto ps = divisors_bounded(ip.front(), 4096);
    const auto qs = divisors_bounded(ip.back(), 4096);
    if (ps.empty() || qs.empty()) return std::nullopt;
    bool found = false;
    for (const auto& pp : ps) {
      for (const auto& qq : qs) {
        for (int s : {1, -1}) {
          const Rational cand = Rational(s * pp, qq);
          if (poly_eval(p, cand) == 0) {
            roots.push_back(cand);
            p = poly_divide_exact(p, Poly{-cand, Rational(1)});
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) return std::nullopt;  // remaining factor has no rational root
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

SpectralResolution spectral_resolution(
    const Hermitian& a, const std::optional<std::vector<SpectralResolution::Eigenpair>>& hint) {
  if (hint) {
    SpectralResolution r(*hint);  // throws InvalidHint on structural defects
    if (r.reconstruct() != a.mat())
      fail("InvalidHint", "hint does not reconstruct the operator");
    return r;
  }
  const int n = a.dim();
  if (a.mat().is_diagonal()) {
    std::map<Rational, Matrix> groups;
    for (int i = 0; i < n; ++i) {
      const Complex& d = a.mat().at(i, i);
      auto it = groups.try_emplace(d.re, Matrix::zero(n)).first;
      it->second.at(i, i) = Complex(Rational(1));
    }
    std::vector<SpectralResolution::Eigenpair> pairs;
    for (auto& [value, proj] : groups) pairs.push_back({value, Projector(std::move(proj))});
    return SpectralResolution(std::move(pairs));
  }
  // Squarefree part of the characteristic polynomial carries each eigenvalue
  // exactly once; a hermitian matrix is annihilated by it.
  const Poly cp = char_poly(a.mat());
  const Poly sf = poly_divide_exact(cp, poly_gcd(cp, poly_derivative(cp)));
  const auto roots = rational_roots(sf);
  if (!roots || roots->empty() ||
      static_cast<int>(roots->size()) != static_cast<int>(poly_trim(sf).size()) - 1)
    fail("IrrationalSpectrum",
         "eigenvalues are not rational-discoverable; supply an explicit resolution hint");
  // Lagrange interpolation gives the eigenprojectors.
  std::vector<SpectralResolution::Eigenpair> pairs;
  for (const Rational& lam : *roots) {
    Matrix p = Matrix::identity(n);
    for (const Rational& mu : *roots) {
      if (mu == lam) continue;
      p = (a.mat() - Matrix::identity(n) * Complex(mu)) * p;
      p = p * Complex(Rational(1) / (lam - mu));
    }
    if (p.is_zero()) continue;
    pairs.push_back({lam, Projector(std::move(p))});
  }
  SpectralResolution r(std::move(pairs));
  if (r.reconstruct() != a.mat())
    fail("IrrationalSpectrum", "exact eigendecomposition failed; supply a hint");
  return r;
}

bool spectral_leq(const Hermitian& a, const Hermitian& b) {
  require_same_dim(a.dim(), b.dim(), "spectral order");
  const SpectralFamily fa = spectral_family(a.resolution());
  const SpectralFamily fb = spectral_family(b.resolution());
  std::vector<Rational> breakpoints;
  for (const auto& s : fa.steps()) breakpoints.push_back(s.threshold);
  for (const auto& s : fb.steps()) breakpoints.push_back(s.threshold);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  for (const auto& r : breakpoints)
    if (!projector_leq(fb.at(r), fa.at(r))) return false;
  return true;
}

UnitVector::UnitVector(Vector v) : v_(std::move(v)) {
  if (v_.empty()) fail("NotNormalized", "empty state vector");
  const Complex n = inner(v_, v_);
  if (!(n.is_real() && n.re == 1))
    fail("NotNormalized", "<psi|psi> = " + n.str() + ", expected 1");
}

Density::Density(std::vector<Term> mix) : mix_(std::move(mix)) {
  if (mix_.empty()) fail("ValidationError", "density needs a nonempty convex decomposition");
  const int d = mix_.front().state.dim();
  Rational total = 0;
  Matrix m = Matrix::zero(d);
  for (const auto& t : mix_) {
    if (t.state.dim() != d) fail("DimensionMismatch", "mixed dimensions in density decomposition");
    if (!(t.weight > 0)) fail("ValidationError", "density weights must be positive");
    total += t.weight;
    m = m + Matrix::outer(t.state.vec(), t.state.vec()) * Complex(t.weight);
  }
  if (total != 1) fail("ValidationError", "density weights sum to " + to_string(total));
  m_ = std::move(m);
}

Density::Density(Matrix m, std::vector<Term> mix) : Density(std::move(mix)) {
  if (m != m_) fail("ValidationError", "density matrix does not equal its decomposition");
}

Rational expectation(const UnitVector& psi, const Matrix& a) {
  require_same_dim(psi.dim(), a.dim(), "expectation");
  const Complex v = inner(psi.vec(), a.apply(psi.vec()));
  if (!v.is_real()) fail("NotHermitian", "expectation value has nonzero imaginary part");
  return v.re;
}

Rational expectation(const Density& rho, const Matrix& a) {
  require_same_dim(rho.dim(), a.dim(), "expectation");
  const Complex v = (rho.mat() * a).trace();
  if (!v.is_real()) fail("NotHermitian", "tr(rho A) has nonzero imaginary part");
  return v.re;
}

Projector interval_projector(const SpectralResolution& r, const Rational& lo,
                             const Rational& hi) {
  Projector p = Projector::zero(r.dim());
  for (const auto& e : r.pairs())
    if (lo <= e.value && e.value <= hi) p = p.orthogonal_sum(e.proj);
  return p;
}

}  // namespace toposqt
