#include "ainf/matrix.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ainf {

namespace {

using Row = Matrix::Row;

// a + c * b on sorted sparse rows.
Row axpy(const RingSpec& ring, const Row& a, const Scalar& c, const Row& b) {
  Row out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].col < a[i].col) {
      Scalar v = ring.mul(c, b[j].value);
      if (v != 0) out.push_back({b[j].col, v});
      ++j;
    } else {
      Scalar v = ring.add(a[i].value, ring.mul(c, b[j].value));
      if (v != 0) out.push_back({a[i].col, v});
      ++i;
      ++j;
    }
  }
  return out;
}

// Incremental row echelon form over a field. Pivot rows are stored with
// leading coefficient 1 and keyed by their leading column.
class FieldEchelon {
 public:
  explicit FieldEchelon(RingSpec ring) : ring_(std::move(ring)) {}

  Row reduce(Row r) const {
    while (!r.empty()) {
      auto it = pivots_.find(r.front().col);
      if (it == pivots_.end()) break;
      r = axpy(ring_, r, ring_.neg(r.front().value), it->second);
    }
    return r;
  }

  // Returns the leading column of the new pivot, or -1 when dependent.
  int insert(Row r) {
    r = reduce(std::move(r));
    if (r.empty()) return -1;
    Scalar inv = ring_.inverse(r.front().value);
    for (auto& e : r) e.value = ring_.mul(e.value, inv);
    int lead = r.front().col;
    pivots_.emplace(lead, std::move(r));
    return lead;
  }

  size_t rank() const { return pivots_.size(); }
  bool has_pivot(int col) const { return pivots_.count(col) != 0; }

  // Back substitution: pivot variables from rows, free variables from `x`
  // (entries at pivot columns are overwritten). Entries at column `rhs_col`
  // act as the right-hand side.
  void back_substitute(Vector& x, int rhs_col) const {
    std::vector<int> cols;
    cols.reserve(pivots_.size());
    for (const auto& kv : pivots_) cols.push_back(kv.first);
    std::sort(cols.rbegin(), cols.rend());
    for (int p : cols) {
      if (p >= rhs_col) continue;
      Scalar v = 0;
      for (const auto& e : pivots_.at(p)) {
        if (e.col == p) continue;
        if (e.col == rhs_col)
          v = ring_.add(v, e.value);
        else if (e.col < rhs_col)
          v = ring_.sub(v, ring_.mul(e.value, x[e.col]));
      }
      x[p] = v;
    }
  }

 private:
  RingSpec ring_;
  std::unordered_map<int, Row> pivots_;
};

using Dense = std::vector<std::vector<Scalar>>;

Dense dense_identity(int n) {
  Dense m(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Matrix from_dense_unchecked(const RingSpec& ring, const Dense& d, int rows, int cols) {
  Matrix m(ring, rows, cols);
  for (int r = 0; r < rows; ++r) {
    Row row;
    for (int c = 0; c < cols; ++c)
      if (d[r][c] != 0) row.push_back({c, d[r][c]});
    m.set_row(r, std::move(row));
  }
  return m;
}

// Euclidean quotient: over Z floor division, over fields exact division.
Scalar quotient(const RingSpec& ring, const Scalar& a, const Scalar& b) {
  if (ring.is_field()) return ring.div(a, b);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
  return Scalar(q);
}

bool divides(const RingSpec& ring, const Scalar& a, const Scalar& b) {
  if (ring.is_field()) return a != 0 || b == 0;
  if (a == 0) return b == 0;
  mpz_class r = b.get_num() % a.get_num();
  return r == 0;
}

Scalar magnitude(const Scalar& x) { return x < 0 ? Scalar(-x) : x; }

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(RingSpec ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows) {
  if (rows < 0 || cols < 0) throw AlgebraError("negative matrix dimension");
}

Matrix Matrix::identity(RingSpec ring, int n) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m.data_[i].push_back({i, Scalar(1)});
  return m;
}

Matrix Matrix::from_dense(RingSpec ring, const std::vector<std::vector<Scalar>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(ring, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw AlgebraError("ragged dense matrix");
    for (int j = 0; j < c; ++j) m.set(i, j, ring.normalize(rows[i][j]));
  }
  return m;
}

Matrix Matrix::from_ints(RingSpec ring, const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Scalar>> d;
  for (const auto& r : rows) {
    std::vector<Scalar> row;
    for (long v : r) row.emplace_back(v);
    d.push_back(std::move(row));
  }
  return from_dense(std::move(ring), d);
}

Matrix Matrix::column(RingSpec ring, const Vector& v) {
  Matrix m(ring, static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m.set(static_cast<int>(i), 0, ring.normalize(v[i]));
  return m;
}

Scalar Matrix::at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw AlgebraError("matrix index out of range");
  const auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, int col) { return e.col < col; });
  if (it != row.end() && it->col == c) return it->value;
  return 0;
}

void Matrix::set(int r, int c, const Scalar& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw AlgebraError("matrix index out of range");
  Scalar value = ring_.normalize(v);
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, int col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    if (value == 0)
      row.erase(it);
    else
      it->value = value;
  } else if (value != 0) {
    row.insert(it, {c, value});
  }
}

void Matrix::add_to(int r, int c, const Scalar& v) { set(r, c, ring_.add(at(r, c), v)); }

void Matrix::set_row(int r, Row row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (row[i].col < 0 || row[i].col >= cols_) throw AlgebraError("row entry out of range");
    if (row[i].value == 0) throw AlgebraError("stored zero in sparse row");
    if (i && row[i - 1].col >= row[i].col) throw AlgebraError("unsorted sparse row");
  }
  data_.at(r) = std::move(row);
}

size_t Matrix::nonzeros() const {
  size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (const auto& e : data_[r]) t.data_[e.col].push_back({r, e.value});
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw AlgebraError("matrix product dimension mismatch");
  if (ring_ != o.ring_) throw AlgebraError("matrix product ring mismatch");
  Matrix out(ring_, rows_, o.cols_);
  for (int r = 0; r < rows_; ++r) {
    Row acc;
    for (const auto& e : data_[r]) acc = axpy(ring_, acc, e.value, o.data_[e.col]);
    out.data_[r] = std::move(acc);
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw AlgebraError("matrix sum dimension mismatch");
  Matrix out(ring_, rows_, cols_);
  for (int r = 0; r < rows_; ++r) out.data_[r] = axpy(ring_, data_[r], Scalar(1), o.data_[r]);
  return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw AlgebraError("matrix difference dimension mismatch");
  Matrix out(ring_, rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    out.data_[r] = axpy(ring_, data_[r], ring_.neg(Scalar(1)), o.data_[r]);
  return out;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix out(ring_, rows_, cols_);
  for (int r = 0; r < rows_; ++r) out.data_[r] = axpy(ring_, Row{}, s, data_[r]);
  return out;
}

Vector Matrix::apply(const Vector& x) const {
  if (static_cast<int>(x.size()) != cols_) throw AlgebraError("matrix-vector dimension mismatch");
  Vector y(rows_, Scalar(0));
  for (int r = 0; r < rows_; ++r) {
    Scalar acc = 0;
    for (const auto& e : data_[r])
      if (x[e.col] != 0) acc = ring_.add(acc, ring_.mul(e.value, x[e.col]));
    y[r] = acc;
  }
  return y;
}

Matrix Matrix::over(const RingSpec& ring) const {
  Matrix out(ring, rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    Row row;
    for (const auto& e : data_[r]) {
      Scalar v = ring.normalize(e.value);
      if (v != 0) row.push_back({e.col, v});
    }
    out.data_[r] = std::move(row);
  }
  return out;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw AlgebraError("hstack row mismatch");
  Matrix out(a.ring_, a.rows_, a.cols_ + b.cols_);
  for (int r = 0; r < a.rows_; ++r) {
    Row row = a.data_[r];
    for (const auto& e : b.data_[r]) row.push_back({e.col + a.cols_, e.value});
    out.data_[r] = std::move(row);
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw AlgebraError("vstack column mismatch");
  Matrix out(a.ring_, a.rows_ + b.rows_, a.cols_);
  for (int r = 0; r < a.rows_; ++r) out.data_[r] = a.data_[r];
  for (int r = 0; r < b.rows_; ++r) out.data_[a.rows_ + r] = b.data_[r];
  return out;
}

Matrix Matrix::direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (int r = 0; r < a.rows_; ++r) out.data_[r] = a.data_[r];
  for (int r = 0; r < b.rows_; ++r) {
    Row row;
    for (const auto& e : b.data_[r]) row.push_back({e.col + a.cols_, e.value});
    out.data_[a.rows_ + r] = std::move(row);
  }
  return out;
}

Matrix Matrix::select_columns(const std::vector<int>& cols) const {
  std::unordered_map<int, int> where;
  for (size_t i = 0; i < cols.size(); ++i) where[cols[i]] = static_cast<int>(i);
  Matrix out(ring_, rows_, static_cast<int>(cols.size()));
  for (int r = 0; r < rows_; ++r) {
    Row row;
    for (const auto& e : data_[r]) {
      auto it = where.find(e.col);
      if (it != where.end()) row.push_back({it->second, e.value});
    }
    std::sort(row.begin(), row.end(), [](const Entry& x, const Entry& y) { return x.col < y.col; });
    out.data_[r] = std::move(row);
  }
  return out;
}

Matrix Matrix::select_rows(const std::vector<int>& rows) const {
  Matrix out(ring_, static_cast<int>(rows.size()), cols_);
  for (size_t i = 0; i < rows.size(); ++i) out.data_[i] = data_.at(rows[i]);
  return out;
}

std::vector<std::vector<Scalar>> Matrix::to_dense() const {
  Dense d(rows_, std::vector<Scalar>(cols_, Scalar(0)));
  for (int r = 0; r < rows_; ++r)
    for (const auto& e : data_[r]) d[r][e.col] = e.value;
  return d;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  auto d = to_dense();
  for (int r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < cols_; ++c) os << (c ? "," : "") << d[r][c].get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (int r = 0; r < rows_; ++r) {
    const auto& a = data_[r];
    const auto& b = o.data_[r];
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].col != b[i].col || a[i].value != b[i].value) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Smith normal form (dense, with transforms)

SmithForm smith_normal_form(const Matrix& m) {
  const RingSpec& ring = m.ring();
  const int rows = m.rows(), cols = m.cols();
  Dense a = m.to_dense();
  Dense u = dense_identity(rows), ui = dense_identity(rows);
  Dense v = dense_identity(cols), vi = dense_identity(cols);

  auto row_axpy = [&](int dst, int src, const Scalar& q) {  // row_dst -= q row_src
    for (int j = 0; j < cols; ++j)
      if (a[src][j] != 0) a[dst][j] = ring.sub(a[dst][j], ring.mul(q, a[src][j]));
    for (int j = 0; j < rows; ++j)
      if (u[src][j] != 0) u[dst][j] = ring.sub(u[dst][j], ring.mul(q, u[src][j]));
    for (int i = 0; i < rows; ++i)
      if (ui[i][dst] != 0) ui[i][src] = ring.add(ui[i][src], ring.mul(q, ui[i][dst]));
  };
  auto col_axpy = [&](int dst, int src, const Scalar& q) {  // col_dst -= q col_src
    for (int i = 0; i < rows; ++i)
      if (a[i][src] != 0) a[i][dst] = ring.sub(a[i][dst], ring.mul(q, a[i][src]));
    for (int i = 0; i < cols; ++i)
      if (v[i][src] != 0) v[i][dst] = ring.sub(v[i][dst], ring.mul(q, v[i][src]));
    for (int j = 0; j < cols; ++j)
      if (vi[dst][j] != 0) vi[src][j] = ring.add(vi[src][j], ring.mul(q, vi[dst][j]));
  };
  auto swap_rows = [&](int i, int k) {
    if (i == k) return;
    std::swap(a[i], a[k]);
    std::swap(u[i], u[k]);
    for (int r = 0; r < rows; ++r) std::swap(ui[r][i], ui[r][k]);
  };
  auto swap_cols = [&](int j, int k) {
    if (j == k) return;
    for (int r = 0; r < rows; ++r) std::swap(a[r][j], a[r][k]);
    for (int r = 0; r < cols; ++r) std::swap(v[r][j], v[r][k]);
    std::swap(vi[j], vi[k]);
  };
  auto scale_row = [&](int i, const Scalar& c) {  // c must be a unit
    Scalar ci = ring.inverse(c);
    for (int j = 0; j < cols; ++j) a[i][j] = ring.mul(a[i][j], c);
    for (int j = 0; j < rows; ++j) u[i][j] = ring.mul(u[i][j], c);
    for (int r = 0; r < rows; ++r) ui[r][i] = ring.mul(ui[r][i], ci);
  };

  int t = 0;
  const int limit = std::min(rows, cols);
  for (; t < limit; ++t) {
    int pi = -1, pj = -1;
    Scalar best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi < 0 || magnitude(a[i][j]) < best)) {
          pi = i;
          pj = j;
          best = magnitude(a[i][j]);
          if (ring.is_unit(a[i][j])) goto found;
        }
  found:
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        row_axpy(i, t, quotient(ring, a[i][t], a[t][t]));
        if (a[i][t] != 0) {
          swap_rows(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        col_axpy(j, t, quotient(ring, a[t][j], a[t][t]));
        if (a[t][j] != 0) {
          swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      bool fixed = false;
      for (int i = t + 1; i < rows && !fixed; ++i)
        for (int j = t + 1; j < cols && !fixed; ++j)
          if (!divides(ring, a[t][t], a[i][j])) {
            row_axpy(t, i, Scalar(-1));  // row_t += row_i
            fixed = true;
          }
      if (!fixed) break;
    }
    if (ring.is_field())
      scale_row(t, ring.inverse(a[t][t]));
    else if (a[t][t] < 0)
      scale_row(t, Scalar(-1));
  }

  SmithForm out;
  out.rank = t;
  for (int i = 0; i < t; ++i) out.diagonal.push_back(a[i][i]);
  out.d = from_dense_unchecked(ring, a, rows, cols);
  out.u = from_dense_unchecked(ring, u, rows, rows);
  out.u_inv = from_dense_unchecked(ring, ui, rows, rows);
  out.v = from_dense_unchecked(ring, v, cols, cols);
  out.v_inv = from_dense_unchecked(ring, vi, cols, cols);
  return out;
}

// ---------------------------------------------------------------------------
// rank / solve / kernel

int rank(const Matrix& m) {
  if (!m.ring().is_field()) throw AlgebraError("rank requires a field; use smith_normal_form over Z");
  FieldEchelon ech(m.ring());
  for (int r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
  return static_cast<int>(ech.rank());
}

int rational_rank(const Matrix& m) {
  if (m.ring().is_field()) return rank(m);
  return rank(m.over(RingSpec::rationals()));
}

namespace {

std::optional<Vector> solve_field(const Matrix& m, const Vector& b) {
  const RingSpec& ring = m.ring();
  FieldEchelon ech(ring);
  const int n = m.cols();
  for (int r = 0; r < m.rows(); ++r) {
    Row row = m.row(r);
    Scalar rhs = ring.normalize(b[r]);
    if (rhs != 0) row.push_back({n, rhs});
    int lead = ech.insert(std::move(row));
    if (lead == n) return std::nullopt;
  }
  Vector x(n, Scalar(0));
  ech.back_substitute(x, n);
  return x;
}

std::optional<Vector> solve_smith(const Matrix& m, const Vector& b) {
  const RingSpec& ring = m.ring();
  SmithForm s = smith_normal_form(m);
  Vector y = s.u.apply(b);
  Vector xp(m.cols(), Scalar(0));
  for (int i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      if (!divides(ring, s.diagonal[i], y[i])) return std::nullopt;
      xp[i] = ring.div(y[i], s.diagonal[i]);
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(xp);
}

}  // namespace

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw AlgebraError("solve: right-hand side has wrong length");
  if (m.ring().is_field()) return solve_field(m, b);
  // Over Z try the rational route first; integral answers are accepted as is.
  auto q = solve_field(m.over(RingSpec::rationals()), b);
  if (!q) return std::nullopt;
  bool integral = std::all_of(q->begin(), q->end(), [](const Scalar& x) { return x.get_den() == 1; });
  if (integral) return q;
  return solve_smith(m, b);
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  const RingSpec& ring = m.ring();
  std::vector<Vector> basis;
  if (ring.is_field()) {
    FieldEchelon ech(ring);
    for (int r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
    for (int j = 0; j < m.cols(); ++j) {
      if (ech.has_pivot(j)) continue;
      Vector x(m.cols(), Scalar(0));
      x[j] = 1;
      ech.back_substitute(x, m.cols());
      basis.push_back(std::move(x));
    }
    return basis;
  }
  SmithForm s = smith_normal_form(m);
  auto v = s.v.to_dense();
  for (int j = s.rank; j < m.cols(); ++j) {
    Vector x(m.cols());
    for (int i = 0; i < m.cols(); ++i) x[i] = v[i][j];
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<Scalar> torsion_factors(const Matrix& m) {
  if (m.ring().is_field()) return {};
  const RingSpec& ring = m.ring();
  // Strip unit pivots sparsely; each contributes an invariant factor 1 and
  // leaves the Smith form of the remainder unchanged.
  std::vector<Row> rows(m.rows());
  std::map<int, std::set<int>> col_rows;
  for (int r = 0; r < m.rows(); ++r) {
    rows[r] = m.row(r);
    for (const auto& e : rows[r]) col_rows[e.col].insert(r);
  }
  std::vector<bool> alive(m.rows(), true);
  for (;;) {
    int pr = -1, pc = -1;
    size_t best = 0;
    for (int r = 0; r < m.rows(); ++r) {
      if (!alive[r]) continue;
      for (const auto& e : rows[r])
        if (ring.is_unit(e.value) && (pr < 0 || rows[r].size() < best)) {
          pr = r;
          pc = e.col;
          best = rows[r].size();
          break;
        }
    }
    if (pr < 0) break;
    Scalar piv = 0;
    for (const auto& e : rows[pr])
      if (e.col == pc) piv = e.value;
    std::vector<int> targets(col_rows[pc].begin(), col_rows[pc].end());
    for (int r : targets) {
      if (r == pr) continue;
      Scalar coef = 0;
      for (const auto& e : rows[r])
        if (e.col == pc) coef = e.value;
      for (const auto& e : rows[r]) col_rows[e.col].erase(r);
      rows[r] = axpy(ring, rows[r], ring.neg(ring.div(coef, piv)), rows[pr]);
      for (const auto& e : rows[r]) col_rows[e.col].insert(r);
    }
    for (const auto& e : rows[pr]) col_rows[e.col].erase(pr);
    rows[pr].clear();
    alive[pr] = false;
  }
  std::vector<int> keep_rows;
  std::set<int> keep_cols;
  for (int r = 0; r < m.rows(); ++r)
    if (alive[r] && !rows[r].empty()) {
      keep_rows.push_back(r);
      for (const auto& e : rows[r]) keep_cols.insert(e.col);
    }
  if (keep_rows.empty()) return {};
  std::vector<int> cols(keep_cols.begin(), keep_cols.end());
  std::unordered_map<int, int> where;
  for (size_t i = 0; i < cols.size(); ++i) where[cols[i]] = static_cast<int>(i);
  Matrix core(ring, static_cast<int>(keep_rows.size()), static_cast<int>(cols.size()));
  for (size_t i = 0; i < keep_rows.size(); ++i)
    for (const auto& e : rows[keep_rows[i]]) core.set(static_cast<int>(i), where[e.col], e.value);
  SmithForm s = smith_normal_form(core);
  std::vector<Scalar> out;
  for (const auto& d : s.diagonal)
    if (d != 1) out.push_back(d);
  return out;
}

Vector zero_vector(int n) { return Vector(n, Scalar(0)); }

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x == 0; });
}

}  // namespace ainf
