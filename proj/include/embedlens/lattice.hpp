#pragma once

// Integer matrices, Smith normal form with unimodular certificates, and
// row-lattice membership questions.

#include "embedlens/errors.hpp"
#include "embedlens/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace embedlens {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw ValidationError("negative matrix dimension");
  }
  IntMatrix(int rows, int cols, std::vector<Integer> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 0 || cols < 0 || data_.size() != static_cast<std::size_t>(rows) * cols) {
      throw ValidationError("matrix dimensions do not match entry count");
    }
  }
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw ValidationError("ragged matrix literal");
      for (long long v : r) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, int cols) {
    IntMatrix m(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.rows_; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Integer& operator()(int i, int j) { return data_[index(i, j)]; }
  const Integer& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::vector<Integer> row(int i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(index(i, 0)),
            data_.begin() + static_cast<std::ptrdiff_t>(index(i, 0) + static_cast<std::size_t>(cols_))};
  }
  std::vector<Integer> column(int j) const {
    std::vector<Integer> c;
    for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row dst += q * row src
  void add_row_multiple(int dst, int src, const Integer& q) {
    for (int j = 0; j < cols_; ++j) {
      if (!is_zero((*this)(src, j))) (*this)(dst, j) += q * (*this)(src, j);
    }
  }
  // col dst += q * col src
  void add_col_multiple(int dst, int src, const Integer& q) {
    for (int i = 0; i < rows_; ++i) {
      if (!is_zero((*this)(i, src))) (*this)(i, dst) += q * (*this)(i, src);
    }
  }
  void negate_row(int i) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  std::vector<Integer> operator*(const std::vector<Integer>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw ValidationError("matrix-vector dimension mismatch");
    std::vector<Integer> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
    }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
      os << '[';
      for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
      os << "]\n";
    }
    return os.str();
  }

 private:
  static bool is_zero(const Integer& v) { return v.is_zero(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Integer> data_;
};

// Fraction-free (Bareiss) determinant.
inline Integer determinant(IntMatrix a) {
  if (a.rows() != a.cols()) throw ValidationError("determinant of a non-square matrix");
  const int n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap_with = -1;
      for (int i = k + 1; i < n; ++i) {
        if (a(i, k) != 0) {
          swap_with = i;
          break;
        }
      }
      if (swap_with < 0) return 0;
      a.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ... | dr,
// followed by zeros.
struct SNFDecomposition {
  IntMatrix U;
  IntMatrix V;
  IntMatrix D;
  std::vector<Integer> divisors;  // length min(rows, cols), nonnegative
  int rank = 0;
};

namespace detail {

// Minimal nonzero |entry| in the trailing submatrix from (t, t); ties go to
// the smallest (row, col).
inline std::optional<std::pair<int, int>> find_snf_pivot(const IntMatrix& d, int t) {
  std::optional<std::pair<int, int>> best;
  Integer best_abs;
  for (int i = t; i < d.rows(); ++i) {
    for (int j = t; j < d.cols(); ++j) {
      const Integer& v = d(i, j);
      if (v.is_zero()) continue;
      Integer a = abs(v);
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = std::move(a);
        if (best_abs == 1) return best;
      }
    }
  }
  return best;
}

}  // namespace detail

inline SNFDecomposition smith_normal_form(const IntMatrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  SNFDecomposition out{IntMatrix::identity(m), IntMatrix::identity(n), a, {}, 0};
  IntMatrix& d = out.D;
  IntMatrix& u = out.U;
  IntMatrix& v = out.V;

  int t = 0;
  for (; t < std::min(m, n); ++t) {
    bool exhausted = false;
    while (true) {
      const auto piv = detail::find_snf_pivot(d, t);
      if (!piv) {
        exhausted = true;
        break;
      }
      d.swap_rows(t, piv->first);
      u.swap_rows(t, piv->first);
      d.swap_cols(t, piv->second);
      v.swap_cols(t, piv->second);

      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (d(i, t).is_zero()) continue;
        const Integer q = d(i, t) / d(t, t);
        d.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (!d(i, t).is_zero()) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (d(t, j).is_zero()) continue;
        const Integer q = d(t, j) / d(t, t);
        d.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (!d(t, j).is_zero()) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide the whole trailing block.
      int bad_row = -1;
      for (int i = t + 1; i < m && bad_row < 0; ++i) {
        for (int j = t + 1; j < n; ++j) {
          if (!d(i, j).is_zero() && !Integer(d(i, j) % d(t, t)).is_zero()) {
            bad_row = i;
            break;
          }
        }
      }
      if (bad_row < 0) break;
      d.add_row_multiple(t, bad_row, 1);
      u.add_row_multiple(t, bad_row, 1);
    }
    if (exhausted) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  out.rank = t;
  for (int i = 0; i < std::min(m, n); ++i) out.divisors.push_back(d(i, i));
  return out;
}

// Echelon basis of the row lattice of g (no transform tracked). Rows are
// linearly independent, so the row count is the rank.
inline IntMatrix lattice_basis(const IntMatrix& g) {
  const int cols = g.cols();
  std::vector<std::vector<Integer>> pending;
  for (int i = 0; i < g.rows(); ++i) {
    auto r = g.row(i);
    if (std::any_of(r.begin(), r.end(), [](const Integer& x) { return !x.is_zero(); })) {
      pending.push_back(std::move(r));
    }
  }
  std::vector<std::vector<Integer>> basis;
  for (int c = 0; c < cols && !pending.empty(); ++c) {
    const auto col = static_cast<std::size_t>(c);
    while (true) {
      std::size_t piv = pending.size();
      Integer best;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (pending[i][col].is_zero()) continue;
        Integer a = abs(pending[i][col]);
        if (piv == pending.size() || a < best) {
          piv = i;
          best = std::move(a);
        }
      }
      if (piv == pending.size()) break;
      bool clean = true;
      const auto& p = pending[piv];
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (i == piv || pending[i][col].is_zero()) continue;
        const Integer q = pending[i][col] / p[col];
        auto& r = pending[i];
        for (std::size_t j = col; j < r.size(); ++j) {
          if (!p[j].is_zero()) r[j] -= q * p[j];
        }
        if (!r[col].is_zero()) clean = false;
      }
      if (clean) {
        basis.push_back(std::move(pending[piv]));
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(piv));
        std::erase_if(pending, [&](const std::vector<Integer>& r) {
          return std::all_of(r.begin() + c, r.end(), [](const Integer& x) { return x.is_zero(); });
        });
        break;
      }
    }
  }
  return IntMatrix::from_rows(basis, cols);
}

// Invariants of the row lattice of a generator matrix: rank, elementary
// divisors padded with zeros to the column count, and a unimodular V
// diagonalizing an echelon basis.
struct LatticeInvariants {
  int rank = 0;
  std::vector<Integer> divisors;
  IntMatrix V;
};

inline LatticeInvariants lattice_invariants(const IntMatrix& generators) {
  const IntMatrix basis = lattice_basis(generators);
  const auto snf = smith_normal_form(basis);
  LatticeInvariants inv{snf.rank, snf.divisors, snf.V};
  inv.divisors.resize(static_cast<std::size_t>(generators.cols()), Integer(0));
  return inv;
}

inline bool lattice_is_full(const IntMatrix& generators) {
  const auto inv = lattice_invariants(generators);
  if (inv.rank != generators.cols()) return false;
  return std::all_of(inv.divisors.begin(), inv.divisors.end(), [](const Integer& d) { return d == 1; });
}

// Primitive integer vector v != 0 with generators * v = 0, sign-normalized so
// its first nonzero entry is positive; nullopt when the columns are
// independent.
inline std::optional<std::vector<Integer>> rational_kernel_vector(const IntMatrix& generators) {
  const auto inv = lattice_invariants(generators);
  if (inv.rank >= generators.cols()) return std::nullopt;
  auto v = inv.V.column(inv.rank);
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, abs(x));
  for (auto& x : v) x /= g;
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    if (x < 0) {
      for (auto& y : v) y = -y;
    }
    break;
  }
  return v;
}

}  // namespace embedlens
