#pragma once

#include "toposqt/error.hpp"
#include "toposqt/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toposqt {

// Gaussian-rational scalar. All arithmetic is exact; there is no floating
// point anywhere in the core.
struct Complex {
  Rational re;
  Rational im;

  Complex() = default;
  Complex(Rational r) : re(std::move(r)) {}  // NOLINT: implicit real lift
  Complex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  Complex conj() const { return {re, -im}; }

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator-() const { return {-re, -im}; }
  Complex operator*(const Complex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  Complex operator/(const Complex& o) const;

  bool operator==(const Complex& o) const { return re == o.re && im == o.im; }
  bool operator!=(const Complex& o) const { return !(*this == o); }

  // Total order used only for canonical sorting, not algebra.
  std::strong_ordering operator<=>(const Complex& o) const {
    if (re != o.re) return re < o.re ? std::strong_ordering::less : std::strong_ordering::greater;
    if (im != o.im) return im < o.im ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const;
};

using Vector = std::vector<Complex>;

// <x|y> = sum conj(x_i) y_i
Complex inner(const Vector& x, const Vector& y);

// Dense square matrix over Gaussian rationals, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}
  Matrix(int dim, std::vector<Complex> entries);

  static Matrix identity(int dim);
  static Matrix zero(int dim) { return Matrix(dim); }
  // |x><y| (no normalisation applied).
  static Matrix outer(const Vector& x, const Vector& y);

  int dim() const { return dim_; }
  const Complex& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  Complex& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Complex& c) const;
  Vector apply(const Vector& v) const;

  Matrix adjoint() const;
  Complex trace() const;
  bool is_zero() const;
  bool is_hermitian() const;
  // First entry (i,j) violating hermiticity, if any.
  std::optional<std::pair<int, int>> hermitian_defect() const;
  // First entry where M*M differs from M, if any.
  std::optional<std::pair<int, int>> idempotent_defect() const;
  bool is_unitary() const;
  bool is_diagonal() const;

  bool operator==(const Matrix& o) const { return dim_ == o.dim_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  // Canonical key: lexicographic over the row-major entry sequence.
  std::strong_ordering operator<=>(const Matrix& o) const;

  std::string str() const;  // compact one-line rendering, for error messages

 private:
  int dim_ = 0;
  std::vector<Complex> a_;
};

// Validated orthogonal projector (hermitian, idempotent).
class Projector {
 public:
  // Throws NotHermitian / NotIdempotent naming the first failing entry.
  explicit Projector(Matrix m);

  static Projector zero(int dim);
  static Projector one(int dim);
  // Projector onto the line spanned by v: vv*/<v|v>.
  static Projector onto(const Vector& v);

  const Matrix& mat() const { return m_; }
  int dim() const { return m_.dim(); }
  int rank() const;
  bool is_zero() const { return m_.is_zero(); }

  bool orthogonal_to(const Projector& q) const;  // PQ = 0
  Projector orthogonal_sum(const Projector& q) const;
  Projector complement() const;  // 1 - P

  bool operator==(const Projector& o) const { return m_ == o.m_; }
  bool operator!=(const Projector& o) const { return m_ != o.m_; }
  std::strong_ordering operator<=>(const Projector& o) const { return m_ <=> o.m_; }

 private:
  struct Unchecked {};
  Projector(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

// P <= Q in the projection lattice, i.e. PQ = P exactly.
bool projector_leq(const Projector& p, const Projector& q);

// Strictly increasing eigenvalues with pairwise-orthogonal projectors that
// sum to the identity.
class SpectralResolution {
 public:
  struct Eigenpair {
    Rational value;
    Projector proj;
  };

  explicit SpectralResolution(std::vector<Eigenpair> pairs);

  const std::vector<Eigenpair>& pairs() const { return pairs_; }
  int dim() const { return pairs_.front().proj.dim(); }
  std::vector<Rational> spectrum() const;
  Matrix reconstruct() const;  // sum value_i * proj_i
  bool operator==(const SpectralResolution& o) const;

 private:
  std::vector<Eigenpair> pairs_;
};

// Right-continuous step family E_lambda; breakpoints are exactly the
// eigenvalues and E at a breakpoint includes every eigenprojector with
// eigenvalue <= lambda. The final breakpoint carries the identity.
class SpectralFamily {
 public:
  struct Step {
    Rational threshold;
    Projector below;  // E_threshold
  };

  explicit SpectralFamily(std::vector<Step> steps);

  const std::vector<Step>& steps() const { return steps_; }
  int dim() const { return steps_.front().below.dim(); }
  Projector at(const Rational& lambda) const;  // E_lambda (zero below all steps)

 private:
  std::vector<Step> steps_;
};

SpectralFamily spectral_family(const SpectralResolution& r);
SpectralResolution resolution_from_family(const SpectralFamily& f);

// Hermitian operator, optionally carrying its (validated) resolution.
class Hermitian {
 public:
  explicit Hermitian(Matrix m);  // NotHermitian otherwise
  Hermitian(Matrix m, SpectralResolution r);

  const Matrix& mat() const { return m_; }
  int dim() const { return m_.dim(); }
  bool resolved() const { return res_.has_value(); }
  const SpectralResolution& resolution() const;
  void attach(SpectralResolution r);

  bool operator==(const Hermitian& o) const { return m_ == o.m_; }

 private:
  Matrix m_;
  std::optional<SpectralResolution> res_;
};

// Exact eigendecomposition over Q. Without a hint the eigenvalues must be
// discoverable by rational factorisation of the squarefree characteristic
// polynomial; otherwise IrrationalSpectrum asks the caller for a hint.
SpectralResolution spectral_resolution(
    const Hermitian& a,
    const std::optional<std::vector<SpectralResolution::Eigenpair>>& hint = std::nullopt);

// A <=_s B iff E^A_r >= E^B_r for every r. Checked at the merged breakpoints.
bool spectral_leq(const Hermitian& a, const Hermitian& b);

// Normalised state vector, <psi|psi> = 1 exactly.
class UnitVector {
 public:
  explicit UnitVector(Vector v);  // NotNormalized otherwise
  const Vector& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  Projector projector() const { return Projector::onto(v_); }

 private:
  Vector v_;
};

// Density matrix certified positive by an explicit convex decomposition
// sum p_i |psi_i><psi_i| with rational p_i > 0 summing to one.
class Density {
 public:
  struct Term {
    Rational weight;
    UnitVector state;
  };

  explicit Density(std::vector<Term> mix);
  Density(Matrix m, std::vector<Term> mix);  // checks m equals the mixture

  const Matrix& mat() const { return m_; }
  const std::vector<Term>& mixture() const { return mix_; }
  int dim() const { return m_.dim(); }

 private:
  Matrix m_;
  std::vector<Term> mix_;
};

// <psi|A|psi>, exact; the imaginary part must vanish.
Rational expectation(const UnitVector& psi, const Matrix& a);
// tr(rho A), exact; the imaginary part must vanish.
Rational expectation(const Density& rho, const Matrix& a);

// Spectral projector E[A in [lo,hi]] = sum of eigenprojectors with
// eigenvalue inside the closed interval.
Projector interval_projector(const SpectralResolution& r, const Rational& lo, const Rational& hi);

}  // namespace toposqt
