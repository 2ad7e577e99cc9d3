#include "ainf/random.hpp"

#include <algorithm>
#include <set>

namespace ainf {

namespace {

int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random invertible n x n matrix together with its inverse.
std::pair<Matrix, Matrix> random_unimodular(std::mt19937& rng, const RingSpec& ring, int n) {
  Matrix p = Matrix::identity(ring, n), pi = Matrix::identity(ring, n);
  if (n < 2) return {p, pi};
  for (int step = 0; step < 3 * n; ++step) {
    int i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 2);
    if (j >= i) ++j;
    Scalar c = uniform(rng, -2, 2);
    if (ring.normalize(c) == 0) continue;
    // E = I + c e_i e_j^T, E^{-1} = I - c e_i e_j^T.
    Matrix e = Matrix::identity(ring, n), ei = Matrix::identity(ring, n);
    e.set(i, j, c);
    ei.set(i, j, ring.neg(ring.normalize(c)));
    p = e * p;
    pi = pi * ei;
  }
  return {p, pi};
}

}  // namespace

FiniteComplex random_complex(std::mt19937& rng, const RingSpec& ring, int lo, int hi) {
  // Each piece: (degree, length, multiplier); length 1 is a sphere,
  // length 2 a map R --m--> R from degree k to k+1.
  struct Piece {
    int k;
    int len;
    Scalar m;
  };
  std::vector<Piece> pieces;
  int count = uniform(rng, 0, 4);
  for (int i = 0; i < count; ++i) {
    int kind = uniform(rng, 0, 2);
    int k = uniform(rng, lo, hi);
    if (kind == 0 || k == hi) {
      pieces.push_back({k, 1, 0});
    } else if (kind == 1 || ring.is_field()) {
      pieces.push_back({k, 2, 1});
    } else {
      pieces.push_back({k, 2, Scalar(uniform(rng, 2, 4))});
    }
  }
  std::map<int, std::vector<std::string>> basis;
  std::map<int, std::vector<std::tuple<int, int, Scalar>>> arrows;  // k -> (row, col, value)
  for (size_t p = 0; p < pieces.size(); ++p) {
    const auto& pc = pieces[p];
    int col = static_cast<int>(basis[pc.k].size());
    basis[pc.k].push_back("x" + std::to_string(p));
    if (pc.len == 2) {
      int row = static_cast<int>(basis[pc.k + 1].size());
      basis[pc.k + 1].push_back("y" + std::to_string(p));
      arrows[pc.k].emplace_back(row, col, pc.m);
    }
  }
  std::map<int, std::pair<Matrix, Matrix>> conj;
  for (int k = lo - 1; k <= hi + 2; ++k) {
    int n = basis.count(k) ? static_cast<int>(basis[k].size()) : 0;
    conj.emplace(k, random_unimodular(rng, ring, n));
  }
  std::map<int, Matrix> diff;
  for (int k = lo; k <= hi; ++k) {
    int rows = basis.count(k + 1) ? static_cast<int>(basis[k + 1].size()) : 0;
    int cols = basis.count(k) ? static_cast<int>(basis[k].size()) : 0;
    Matrix d(ring, rows, cols);
    for (const auto& [r, c, v] : arrows[k]) d.set(r, c, v);
    diff.emplace(k, conj.at(k + 1).first * d * conj.at(k).second);
  }
  return FiniteComplex(ring, basis, diff);
}

ChainMap random_chain_map(std::mt19937& rng, const FiniteComplex& a, const FiniteComplex& b) {
  const RingSpec& ring = a.ring();
  std::set<int> ks;
  for (int k : a.degrees()) ks.insert(k);
  for (int k : b.degrees()) ks.insert(k);
  // Unknown layout: entries of f_k, row-major, concatenated over k.
  std::map<int, int> offset;
  int unknowns = 0;
  for (int k : ks) {
    offset[k] = unknowns;
    unknowns += b.dim(k) * a.dim(k);
  }
  auto var = [&](int k, int i, int j) { return offset.at(k) + i * a.dim(k) + j; };
  std::vector<Matrix::Row> rows;
  for (int k : ks) {
    if (!ks.count(k + 1)) continue;
    Matrix da = a.d(k), db = b.d(k);
    // (f_{k+1} da - db f_k)[i][j] = 0
    for (int i = 0; i < b.dim(k + 1); ++i)
      for (int j = 0; j < a.dim(k); ++j) {
        std::map<int, Scalar> row;
        for (int t = 0; t < a.dim(k + 1); ++t) {
          Scalar v = da.at(t, j);
          if (v != 0) row[var(k + 1, i, t)] += v;
        }
        for (int t = 0; t < b.dim(k); ++t) {
          Scalar v = db.at(i, t);
          if (v != 0) row[var(k, t, j)] -= v;
        }
        Matrix::Row r;
        for (auto& [c, v] : row) {
          Scalar nv = ring.normalize(v);
          if (nv != 0) r.push_back({c, nv});
        }
        rows.push_back(std::move(r));
      }
  }
  Matrix system(ring, static_cast<int>(rows.size()), unknowns);
  for (size_t i = 0; i < rows.size(); ++i) system.set_row(static_cast<int>(i), rows[i]);
  Vector x = zero_vector(unknowns);
  for (const auto& v : kernel_basis(system)) {
    Scalar c = uniform(rng, -1, 1);
    for (int i = 0; i < unknowns; ++i) x[i] = ring.add(x[i], ring.mul(c, v[i]));
  }
  ChainMap f{a, b, {}};
  for (int k : ks) {
    Matrix m(ring, b.dim(k), a.dim(k));
    for (int i = 0; i < b.dim(k); ++i)
      for (int j = 0; j < a.dim(k); ++j) m.set(i, j, x[var(k, i, j)]);
    f.components[k] = m;
  }
  return f;
}

ChainMap random_sweep_map(std::mt19937& rng, const RingSpec& ring) {
  FiniteComplex a = random_complex(rng, ring);
  if (uniform(rng, 0, 1) == 0) {
    FiniteComplex b = random_complex(rng, ring);
    return random_chain_map(rng, a, b);
  }
  // b = a + disks; f = inclusion + (d h + h d) for a random h.
  std::map<int, std::vector<std::string>> basis = a.basis();
  int disks = uniform(rng, 0, 2);
  std::vector<int> where;
  for (int i = 0; i < disks; ++i) {
    int n = uniform(rng, 0, 3);
    where.push_back(n);
    basis[n - 1].push_back("e" + std::to_string(i));
    basis[n].push_back("de" + std::to_string(i));
  }
  std::set<int> ks;
  for (auto& [k, l] : basis)
    if (!l.empty()) ks.insert(k);
  std::map<int, Matrix> bdiff;
  for (int k : ks) {
    int rows = basis.count(k + 1) ? static_cast<int>(basis[k + 1].size()) : 0;
    Matrix m(ring, rows, static_cast<int>(basis[k].size()));
    Matrix old = a.d(k);
    for (int r = 0; r < old.rows(); ++r)
      for (const auto& e : old.row(r)) m.set(r, e.col, e.value);
    for (int i = 0; i < disks; ++i) {
      if (where[i] - 1 != k) continue;
      auto pos = [&](int deg, const std::string& l) {
        const auto& v = basis[deg];
        return static_cast<int>(std::find(v.begin(), v.end(), l) - v.begin());
      };
      m.set(pos(k + 1, "de" + std::to_string(i)), pos(k, "e" + std::to_string(i)), 1);
    }
    bdiff.emplace(k, m);
  }
  FiniteComplex b(ring, basis, bdiff);
  ChainMap f{a, b, {}};
  std::map<int, Matrix> h;  // h_k : a^k -> b^{k-1}
  std::set<int> all = ks;
  for (int k : a.degrees()) all.insert(k);
  for (int k : all) {
    Matrix m(ring, b.dim(k - 1), a.dim(k));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m.set(i, j, ring.normalize(uniform(rng, -1, 1)));
    h.emplace(k, m);
  }
  auto hk = [&](int k) {
    auto it = h.find(k);
    return it != h.end() ? it->second : Matrix(ring, b.dim(k - 1), a.dim(k));
  };
  for (int k : all) {
    Matrix incl(ring, b.dim(k), a.dim(k));
    for (int i = 0; i < a.dim(k); ++i) incl.set(i, i, 1);
    f.components[k] = incl + b.d(k - 1) * hk(k) + hk(k + 1) * a.d(k);
  }
  return f;
}

}  // namespace ainf
