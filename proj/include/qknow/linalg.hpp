#pragma once

#include <qknow/errors.hpp>
#include <qknow/scalar.hpp>

#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qknow {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : entries_(dim) {}
  explicit Vector(std::vector<GaussianRational> entries) : entries_(std::move(entries)) {}
  Vector(std::initializer_list<GaussianRational> entries) : entries_(entries) {}

  /// Standard basis vector e_k of C^dim.
  static Vector unit(std::size_t dim, std::size_t k) {
    Vector v(dim);
    v.entries_.at(k) = 1;
    return v;
  }

  std::size_t dim() const { return entries_.size(); }
  const GaussianRational& operator[](std::size_t k) const { return entries_[k]; }
  GaussianRational& operator[](std::size_t k) { return entries_[k]; }
  const std::vector<GaussianRational>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool is_zero() const {
    for (const auto& z : entries_)
      if (!z.is_zero()) return false;
    return true;
  }

  Vector& operator+=(const Vector& o) {
    check_dim(o);
    for (std::size_t k = 0; k < dim(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_dim(o);
    for (std::size_t k = 0; k < dim(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  Vector& operator*=(const GaussianRational& c) {
    for (auto& z : entries_) z *= c;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const GaussianRational& c, Vector v) { return v *= c; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  void check_dim(const Vector& o) const {
    if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
  }

  std::vector<GaussianRational> entries_;
};

inline std::string to_string(const Vector& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.dim(); ++k) {
    if (k) out += ", ";
    out += to_string(v[k]);
  }
  return out + "]";
}

/// <u|v> = sum_k conj(u_k) v_k, conjugate-linear in the first argument.
inline GaussianRational inner(const Vector& u, const Vector& v) {
  if (u.dim() != v.dim()) throw DimensionMismatch(u.dim(), v.dim());
  GaussianRational sum;
  for (std::size_t k = 0; k < u.dim(); ++k) sum += u[k].conj() * v[k];
  return sum;
}

/// Dense row-major matrix over the Gaussian rationals.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  GaussianRational& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const GaussianRational& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<GaussianRational> entries_;
};

/// Solves A x = b exactly by Gauss-Jordan elimination. A must be square and invertible.
inline Vector solve(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch(n, a.cols());
  if (b.dim() != n) throw DimensionMismatch(n, b.dim());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) throw std::domain_error("singular matrix in exact solve");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
      std::swap(b[pivot], b[col]);
    }
    const GaussianRational inv = GaussianRational(1) / a.at(col, col);
    for (std::size_t c = col; c < n; ++c) a.at(col, c) *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a.at(r, col).is_zero()) continue;
      const GaussianRational factor = a.at(r, col);
      for (std::size_t c = col; c < n; ++c) a.at(r, c) -= factor * a.at(col, c);
      b[r] -= factor * b[col];
    }
  }
  return b;
}

class Subspace;
Subspace canonicalize(std::span<const Vector> vectors, std::size_t ambient_dim);

/// A linear subspace of C^d held in reduced row-echelon form: pivots equal 1,
/// pivot columns are zero elsewhere, pivot columns strictly increase. The
/// form is unique, so structural equality is subspace equality.
class Subspace {
 public:
  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim, {}); }
  static Subspace full(std::size_t ambient_dim) {
    std::vector<Vector> basis;
    for (std::size_t k = 0; k < ambient_dim; ++k) basis.push_back(Vector::unit(ambient_dim, k));
    return Subspace(ambient_dim, std::move(basis));
  }
  static Subspace span(std::initializer_list<Vector> vectors, std::size_t ambient_dim) {
    return canonicalize(std::span<const Vector>(vectors.begin(), vectors.size()), ambient_dim);
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  bool is_zero() const { return basis_.empty(); }
  bool is_full() const { return basis_.size() == ambient_dim_; }

  /// Column index of the leading 1 in each basis row.
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& row : basis_) {
      std::size_t c = 0;
      while (row[c].is_zero()) ++c;
      out.push_back(c);
    }
    return out;
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  Subspace(std::size_t ambient_dim, std::vector<Vector> rref) : ambient_dim_(ambient_dim), basis_(std::move(rref)) {}
  friend Subspace canonicalize(std::span<const Vector>, std::size_t);

  std::size_t ambient_dim_;
  std::vector<Vector> basis_;
};

/// Reduced row-echelon basis of span(vectors). Pivoting takes the leftmost
/// column with a nonzero entry and, within it, the first remaining row.
inline Subspace canonicalize(std::span<const Vector> vectors, std::size_t ambient_dim) {
  std::vector<Vector> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.dim() != ambient_dim) throw DimensionMismatch(ambient_dim, v.dim());
    if (!v.is_zero()) rows.push_back(v);
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < ambient_dim && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);

    Vector& lead = rows[rank];
    const GaussianRational inv = GaussianRational(1) / lead[col];
    for (std::size_t c = col; c < ambient_dim; ++c) lead[c] *= inv;

    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const GaussianRational factor = rows[r][col];
      for (std::size_t c = col; c < ambient_dim; ++c) rows[r][c] -= factor * lead[c];
    }
    ++rank;
  }
  rows.resize(rank);
  return Subspace(ambient_dim, std::move(rows));
}

inline Subspace canonicalize(const std::vector<Vector>& vectors, std::size_t ambient_dim) {
  return canonicalize(std::span<const Vector>(vectors), ambient_dim);
}

namespace detail {
inline void require_same_dim(const Subspace& s, std::size_t dim) {
  if (s.ambient_dim() != dim) throw DimensionMismatch(s.ambient_dim(), dim);
}
}  // namespace detail

/// Residual of v after eliminating every pivot of s; zero iff v lies in s.
inline Vector reduce(const Subspace& s, Vector v) {
  detail::require_same_dim(s, v.dim());
  const auto pivots = s.pivots();
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const GaussianRational factor = v[pivots[r]];
    if (factor.is_zero()) continue;
    const Vector& row = s.basis()[r];
    for (std::size_t c = pivots[r]; c < v.dim(); ++c) v[c] -= factor * row[c];
  }
  return v;
}

inline bool contains(const Subspace& s, const Vector& v) { return reduce(s, v).is_zero(); }

inline bool leq(const Subspace& s, const Subspace& t) {
  detail::require_same_dim(t, s.ambient_dim());
  if (s.rank() > t.rank()) return false;
  for (const auto& b : s.basis())
    if (!contains(t, b)) return false;
  return true;
}

inline Subspace join(const Subspace& s, const Subspace& t) {
  detail::require_same_dim(t, s.ambient_dim());
  std::vector<Vector> all = s.basis();
  all.insert(all.end(), t.basis().begin(), t.basis().end());
  return canonicalize(all, s.ambient_dim());
}

/// Null space of the conjugated RREF rows: one vector per free column.
inline Subspace orthocomplement(const Subspace& s) {
  const std::size_t d = s.ambient_dim();
  const auto pivots = s.pivots();
  std::vector<bool> is_pivot(d, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<Vector> out;
  for (std::size_t free = 0; free < d; ++free) {
    if (is_pivot[free]) continue;
    Vector x(d);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -s.basis()[r][free].conj();
    out.push_back(std::move(x));
  }
  return canonicalize(out, d);
}

/// S ∧ T computed as (S⊥ ∨ T⊥)⊥.
inline Subspace meet(const Subspace& s, const Subspace& t) {
  detail::require_same_dim(t, s.ambient_dim());
  return orthocomplement(join(orthocomplement(s), orthocomplement(t)));
}

inline bool orthogonal(const Subspace& s, const Subspace& t) {
  detail::require_same_dim(t, s.ambient_dim());
  for (const auto& a : s.basis())
    for (const auto& b : t.basis())
      if (!inner(a, b).is_zero()) return false;
  return true;
}

/// Orthogonal projection of v onto s, solved through the Gram system of s's
/// (generally non-orthogonal) basis.
inline Vector project(const Subspace& s, const Vector& v) {
  detail::require_same_dim(s, v.dim());
  const auto& basis = s.basis();
  const std::size_t n = basis.size();
  if (n == 0) return Vector(v.dim());

  Matrix gram(n, n);
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram.at(i, j) = inner(basis[i], basis[j]);
    rhs[i] = inner(basis[i], v);
  }
  const Vector coeffs = solve(std::move(gram), std::move(rhs));

  Vector w(v.dim());
  for (std::size_t j = 0; j < n; ++j) w += coeffs[j] * basis[j];
  return w;
}

}  // namespace qknow
