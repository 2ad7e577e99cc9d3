#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ainf/ring.hpp"

namespace ainf {

using Vector = std::vector<Scalar>;

/// Sparse exact matrix. Each row is a column-sorted list of nonzero entries;
/// absent entries are zero and no stored entry is zero.
class Matrix {
 public:
  struct Entry {
    int col;
    Scalar value;
  };
  using Row = std::vector<Entry>;

  Matrix() = default;
  Matrix(RingSpec ring, int rows, int cols);

  static Matrix identity(RingSpec ring, int n);
  static Matrix from_dense(RingSpec ring, const std::vector<std::vector<Scalar>>& rows);
  static Matrix from_ints(RingSpec ring, const std::vector<std::vector<long>>& rows);
  static Matrix column(RingSpec ring, const Vector& v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const RingSpec& ring() const { return ring_; }

  Scalar at(int r, int c) const;
  void set(int r, int c, const Scalar& v);
  void add_to(int r, int c, const Scalar& v);
  const Row& row(int r) const { return data_[r]; }
  /// Replace a whole row; entries must be sorted and nonzero.
  void set_row(int r, Row row);

  size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& s) const;
  Vector apply(const Vector& x) const;
  /// Same entries, coefficients reinterpreted in another ring.
  Matrix over(const RingSpec& ring) const;

  /// Block concatenations; ring and matching dimension required.
  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);
  /// Block diagonal sum.
  static Matrix direct_sum(const Matrix& a, const Matrix& b);
  Matrix select_columns(const std::vector<int>& cols) const;
  Matrix select_rows(const std::vector<int>& rows) const;

  std::vector<std::vector<Scalar>> to_dense() const;
  std::string to_string() const;

  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  RingSpec ring_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Row> data_;
};

/// u * m * v = d, d diagonal with d[i][i] | d[i+1][i+1] and nonnegative
/// entries; u, v unimodular. The inverses are returned as well since the
/// homology code needs both directions.
struct SmithForm {
  Matrix d, u, v;
  Matrix u_inv, v_inv;
  int rank = 0;
  std::vector<Scalar> diagonal;  // nonzero diagonal entries, in order
};

/// Works over every supported ring; over a field every nonzero invariant
/// factor is 1.
SmithForm smith_normal_form(const Matrix& m);

/// Column-span dimension. Rejects the integers (use smith_normal_form).
int rank(const Matrix& m);
/// Rank over the fraction field, accepted for every ring.
int rational_rank(const Matrix& m);

/// Some x with m * x = b over the matrix ring, or nullopt.
std::optional<Vector> solve(const Matrix& m, const Vector& b);

/// Basis of {x : m x = 0}. Over Z the basis spans the saturated kernel lattice.
std::vector<Vector> kernel_basis(const Matrix& m);

/// Nonzero invariant factors (Z) with the unit ones dropped; empty over fields.
std::vector<Scalar> torsion_factors(const Matrix& m);

Vector zero_vector(int n);
bool is_zero(const Vector& v);

}  // namespace ainf
