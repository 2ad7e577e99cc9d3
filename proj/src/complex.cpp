#include "ainf/complex.hpp"

#include <set>
#include <sstream>

namespace ainf {

namespace {

const std::vector<std::string> kNoLabels;

bool onto(const Matrix& m) {
  if (m.ring().is_field()) return rank(m) == m.rows();
  for (int i = 0; i < m.rows(); ++i) {
    Vector e = zero_vector(m.rows());
    e[i] = 1;
    if (!solve(m, e)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteComplex

FiniteComplex::FiniteComplex(RingSpec ring, std::map<int, std::vector<std::string>> basis,
                             std::map<int, Matrix> diff)
    : ring_(std::move(ring)), basis_(std::move(basis)), diff_(std::move(diff)) {
  for (auto it = basis_.begin(); it != basis_.end();)
    it = it->second.empty() ? basis_.erase(it) : std::next(it);
  for (auto it = diff_.begin(); it != diff_.end();)
    it = it->second.is_zero() && it->second.rows() == dim(it->first + 1) &&
                 it->second.cols() == dim(it->first)
             ? diff_.erase(it)
             : std::next(it);
  validate();
}

const std::vector<std::string>& FiniteComplex::labels(int k) const {
  auto it = basis_.find(k);
  return it == basis_.end() ? kNoLabels : it->second;
}

int FiniteComplex::dim(int k) const { return static_cast<int>(labels(k).size()); }

int FiniteComplex::total_dim() const {
  int n = 0;
  for (const auto& kv : basis_) n += static_cast<int>(kv.second.size());
  return n;
}

Matrix FiniteComplex::d(int k) const {
  auto it = diff_.find(k);
  if (it != diff_.end()) return it->second;
  return Matrix(ring_, dim(k + 1), dim(k));
}

std::vector<int> FiniteComplex::degrees() const {
  std::vector<int> out;
  for (const auto& kv : basis_) out.push_back(kv.first);
  return out;
}

void FiniteComplex::validate() const {
  for (const auto& [k, m] : diff_) {
    if (m.rows() != dim(k + 1) || m.cols() != dim(k))
      throw AlgebraError("differential in degree " + std::to_string(k) + " has wrong shape");
    if (m.ring() != ring_) throw AlgebraError("differential over the wrong ring");
  }
  for (const auto& [k, m] : diff_) {
    auto next = diff_.find(k + 1);
    if (next != diff_.end() && !(next->second * m).is_zero())
      throw AlgebraError("d^2 != 0 at degree " + std::to_string(k));
  }
}

std::string FiniteComplex::to_string() const {
  std::ostringstream os;
  os << "complex over " << ring_.name() << "\n";
  for (const auto& [k, labels] : basis_) {
    os << "  degree " << k << ":";
    for (const auto& l : labels) os << " " << l;
    os << "\n";
  }
  for (const auto& [k, m] : diff_) os << "  d" << k << " = " << m.to_string() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// ChainMap

Matrix ChainMap::at(int k) const {
  auto it = components.find(k);
  if (it != components.end()) return it->second;
  return Matrix(source.ring(), target.dim(k), source.dim(k));
}

void ChainMap::validate() const {
  if (source.ring() != target.ring()) throw AlgebraError("chain map between different rings");
  std::set<int> ks;
  for (int k : source.degrees()) ks.insert(k);
  for (int k : target.degrees()) ks.insert(k);
  for (const auto& [k, m] : components) {
    if (m.rows() != target.dim(k) || m.cols() != source.dim(k))
      throw AlgebraError("chain map component " + std::to_string(k) + " has wrong shape");
  }
  for (int k : ks) {
    for (int j : {k - 1, k}) {
      if (at(j + 1) * source.d(j) != target.d(j) * at(j))
        throw AlgebraError("chain map does not commute with d at degree " + std::to_string(j));
    }
  }
}

ChainMap ChainMap::identity(const FiniteComplex& c) {
  ChainMap f{c, c, {}};
  for (int k : c.degrees()) f.components[k] = Matrix::identity(c.ring(), c.dim(k));
  return f;
}

ChainMap ChainMap::zero(const FiniteComplex& a, const FiniteComplex& b) { return ChainMap{a, b, {}}; }

std::string ModuleDescription::to_string(const RingSpec& ring) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << ring.name();
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t.get_str();
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// constructions

FiniteComplex sphere(int n, const RingSpec& ring) {
  return FiniteComplex(ring, {{n, {"s"}}}, {});
}

FiniteComplex disk(int n, const RingSpec& ring) {
  return FiniteComplex(ring, {{n - 1, {"e"}}, {n, {"de"}}}, {{n - 1, Matrix::identity(ring, 1)}});
}

FiniteComplex shift(const FiniteComplex& c, int s) {
  std::map<int, std::vector<std::string>> basis;
  std::map<int, Matrix> diff;
  for (int k : c.degrees()) {
    basis[k - s] = c.labels(k);
    diff.emplace(k - s, c.d(k).scaled(c.ring().sign(s)));
  }
  return FiniteComplex(c.ring(), basis, diff);
}

ModuleDescription homology(const FiniteComplex& c, int k) {
  const Matrix out = c.d(k);
  const Matrix in = c.d(k - 1);
  if (!(out * in).is_zero()) throw AlgebraError("homology of a complex with d^2 != 0");
  ModuleDescription m;
  // rational_rank is the field rank over Q and F_p.
  m.free_rank = c.dim(k) - rational_rank(out) - rational_rank(in);
  if (!c.ring().is_field()) m.torsion = torsion_factors(in);
  return m;
}

std::map<int, ModuleDescription> homology_all(const FiniteComplex& c) {
  std::map<int, ModuleDescription> out;
  for (int k : c.degrees()) out[k] = homology(c, k);
  return out;
}

bool is_acyclic(const FiniteComplex& c) {
  for (int k : c.degrees())
    if (!homology(c, k).is_zero()) return false;
  return true;
}

FiniteComplex cone(const ChainMap& f) {
  f.validate();
  const auto& a = f.source;
  const auto& b = f.target;
  const RingSpec& ring = a.ring();
  std::set<int> ks;
  for (int k : a.degrees()) ks.insert(k - 1);
  for (int k : b.degrees()) ks.insert(k);
  std::map<int, std::vector<std::string>> basis;
  for (int k : ks) {
    auto& labels = basis[k];
    for (const auto& l : a.labels(k + 1)) labels.push_back("a." + l);
    for (const auto& l : b.labels(k)) labels.push_back("b." + l);
  }
  std::map<int, Matrix> diff;
  for (int k : ks) {
    Matrix top = Matrix::hstack(a.d(k + 1).scaled(ring.neg(1)), Matrix(ring, a.dim(k + 2), b.dim(k)));
    Matrix bottom = Matrix::hstack(f.at(k + 1), b.d(k));
    diff.emplace(k, Matrix::vstack(top, bottom));
  }
  return FiniteComplex(ring, basis, diff);
}

FiniteComplex tensor(const FiniteComplex& a, const FiniteComplex& b) {
  if (a.ring() != b.ring()) throw AlgebraError("tensor of complexes over different rings");
  const RingSpec& ring = a.ring();
  // offset[k][i]: position of the block a^i (x) b^{k-i} inside degree k.
  std::map<int, std::map<int, int>> offset;
  std::map<int, std::vector<std::string>> basis;
  for (int i : a.degrees())
    for (int j : b.degrees()) {
      int k = i + j;
      auto& labels = basis[k];
      offset[k][i] = static_cast<int>(labels.size());
      for (const auto& x : a.labels(i))
        for (const auto& y : b.labels(j)) labels.push_back(x + "|" + y);
    }
  std::map<int, Matrix> diff;
  for (auto& [k, blocks] : offset) {
    int rows = static_cast<int>(basis.count(k + 1) ? basis[k + 1].size() : 0);
    Matrix m(ring, rows, static_cast<int>(basis[k].size()));
    for (const auto& [i, off] : blocks) {
      int j = k - i;
      int nb = b.dim(j);
      Matrix da = a.d(i), db = b.d(j);
      // dx (x) y lands in block i+1 of degree k+1.
      if (offset.count(k + 1) && offset[k + 1].count(i + 1)) {
        int off2 = offset[k + 1][i + 1];
        for (int r = 0; r < da.rows(); ++r)
          for (const auto& e : da.row(r))
            for (int y = 0; y < nb; ++y) m.add_to(off2 + r * nb + y, off + e.col * nb + y, e.value);
      }
      // (-1)^i x (x) dy lands in block i of degree k+1.
      if (offset.count(k + 1) && offset[k + 1].count(i)) {
        int off2 = offset[k + 1][i];
        int nb2 = b.dim(j + 1);
        Scalar s = ring.sign(i);
        for (int x = 0; x < a.dim(i); ++x)
          for (int r = 0; r < db.rows(); ++r)
            for (const auto& e : db.row(r))
              m.add_to(off2 + x * nb2 + r, off + x * nb + e.col, ring.mul(s, e.value));
      }
    }
    diff.emplace(k, std::move(m));
  }
  return FiniteComplex(ring, basis, diff);
}

Matrix columns_matrix(const RingSpec& ring, int rows, const std::vector<Vector>& cols) {
  Matrix m(ring, rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i)
      if (cols[j][i] != 0) m.set(i, static_cast<int>(j), cols[j][i]);
  return m;
}

bool homology_surjective(const ChainMap& f, int k) {
  const RingSpec& ring = f.source.ring();
  const auto& a = f.source;
  const auto& b = f.target;
  Matrix za = columns_matrix(ring, a.dim(k), kernel_basis(a.d(k)));
  Matrix images = f.at(k) * za;
  Matrix span = Matrix::hstack(images, b.d(k - 1));
  for (const auto& z : kernel_basis(b.d(k)))
    if (!solve(span, z)) return false;
  return true;
}

bool is_quasi_iso(const ChainMap& f) {
  f.validate();
  std::set<int> ks;
  for (int k : f.source.degrees()) ks.insert(k);
  for (int k : f.target.degrees()) ks.insert(k);
  for (int k : ks) {
    if (homology(f.source, k) != homology(f.target, k)) return false;
    if (!homology_surjective(f, k)) return false;
  }
  return true;
}

std::optional<Homotopy> contracting_homotopy(const FiniteComplex& c) {
  const RingSpec& ring = c.ring();
  Homotopy h;
  auto ks = c.degrees();
  if (ks.empty()) return h;
  // Build h degree by degree from the bottom: h^{k+1} d^k = id - d^{k-1} h^k.
  for (int k = ks.front(); k <= ks.back(); ++k) {
    Matrix hk = h.count(k) ? h.at(k) : Matrix(ring, c.dim(k - 1), c.dim(k));
    Matrix e = Matrix::identity(ring, c.dim(k)) - c.d(k - 1) * hk;
    Matrix dt = c.d(k).transpose();  // dim(k) x dim(k+1)
    Matrix x(ring, c.dim(k), c.dim(k + 1));
    for (int j = 0; j < c.dim(k); ++j) {
      Vector rhs = zero_vector(c.dim(k));
      for (const auto& en : e.row(j)) rhs[en.col] = en.value;
      auto sol = solve(dt, rhs);
      if (!sol) return std::nullopt;
      for (int i = 0; i < c.dim(k + 1); ++i)
        if ((*sol)[i] != 0) x.set(j, i, (*sol)[i]);
    }
    if (c.dim(k + 1) > 0 || c.dim(k) > 0) h[k + 1] = x;
  }
  if (!verify_contracting_homotopy(c, h)) return std::nullopt;
  return h;
}

bool verify_contracting_homotopy(const FiniteComplex& c, const Homotopy& h) {
  const RingSpec& ring = c.ring();
  auto get = [&](int k) {
    auto it = h.find(k);
    return it != h.end() ? it->second : Matrix(ring, c.dim(k - 1), c.dim(k));
  };
  for (int k : c.degrees()) {
    Matrix hk = get(k), hk1 = get(k + 1);
    if (hk.rows() != c.dim(k - 1) || hk.cols() != c.dim(k)) return false;
    if (hk1.rows() != c.dim(k) || hk1.cols() != c.dim(k + 1)) return false;
    if (c.d(k - 1) * hk + hk1 * c.d(k) != Matrix::identity(ring, c.dim(k))) return false;
  }
  return true;
}

bool is_contractible(const FiniteComplex& c) {
  if (c.ring().is_field()) return is_acyclic(c);
  return is_acyclic(c) && contracting_homotopy(c).has_value();
}

namespace {

// Shared layout of tensor(a, b): offset of block a^i (x) b^{k-i} in degree k.
std::map<int, std::map<int, int>> tensor_offsets(const FiniteComplex& a, const FiniteComplex& b) {
  std::map<int, std::map<int, int>> offset;
  std::map<int, int> size;
  for (int i : a.degrees())
    for (int j : b.degrees()) {
      int k = i + j;
      offset[k][i] = size[k];
      size[k] += a.dim(i) * b.dim(j);
    }
  return offset;
}

Matrix homotopy_at(const Homotopy& h, const FiniteComplex& c, int k) {
  auto it = h.find(k);
  return it != h.end() ? it->second : Matrix(c.ring(), c.dim(k - 1), c.dim(k));
}

}  // namespace

Homotopy tensor_homotopy_left(const FiniteComplex& a, const Homotopy& ha, const FiniteComplex& b) {
  FiniteComplex t = tensor(a, b);
  auto offset = tensor_offsets(a, b);
  Homotopy out;
  for (int k : t.degrees()) {
    Matrix m(a.ring(), t.dim(k - 1), t.dim(k));
    for (const auto& [i, off] : offset[k]) {
      if (!offset.count(k - 1) || !offset[k - 1].count(i - 1)) continue;
      int off2 = offset[k - 1][i - 1];
      int nb = b.dim(k - i);
      Matrix h = homotopy_at(ha, a, i);
      for (int r = 0; r < h.rows(); ++r)
        for (const auto& e : h.row(r))
          for (int y = 0; y < nb; ++y) m.add_to(off2 + r * nb + y, off + e.col * nb + y, e.value);
    }
    out[k] = m;
  }
  return out;
}

Homotopy tensor_homotopy_right(const FiniteComplex& a, const FiniteComplex& b, const Homotopy& hb) {
  FiniteComplex t = tensor(a, b);
  auto offset = tensor_offsets(a, b);
  const RingSpec& ring = a.ring();
  Homotopy out;
  for (int k : t.degrees()) {
    Matrix m(ring, t.dim(k - 1), t.dim(k));
    for (const auto& [i, off] : offset[k]) {
      if (!offset.count(k - 1) || !offset[k - 1].count(i)) continue;
      int off2 = offset[k - 1][i];
      int j = k - i;
      int nb = b.dim(j), nb2 = b.dim(j - 1);
      Matrix h = homotopy_at(hb, b, j);
      Scalar s = ring.sign(i);
      for (int x = 0; x < a.dim(i); ++x)
        for (int r = 0; r < h.rows(); ++r)
          for (const auto& e : h.row(r)) m.add_to(off2 + x * nb2 + r, off + x * nb + e.col, ring.mul(s, e.value));
    }
    out[k] = m;
  }
  return out;
}

int image_rank_in_homology(const Matrix& cycles, const Matrix& boundaries) {
  return rational_rank(Matrix::hstack(cycles, boundaries)) - rational_rank(boundaries);
}

bool chain_rlp_disk(const ChainMap& p, int n) { return onto(p.at(n - 1)); }

bool chain_rlp_sphere_disk(const ChainMap& p, int n) {
  const RingSpec& ring = p.source.ring();
  const auto& e = p.source;
  const auto& b = p.target;
  // Squares correspond to pairs (z, c) with z a cycle of E^n, c in B^{n-1}
  // and d c = p z. A lift is some x in E^{n-1} with d x = z and p x = c.
  Matrix kz = columns_matrix(ring, e.dim(n), kernel_basis(e.d(n)));
  Matrix constraint = Matrix::hstack(p.at(n) * kz, b.d(n - 1).scaled(ring.neg(1)));
  Matrix lift = Matrix::vstack(e.d(n - 1), p.at(n - 1));
  for (const auto& w : kernel_basis(constraint)) {
    Vector u(w.begin(), w.begin() + kz.cols());
    Vector c(w.begin() + kz.cols(), w.end());
    Vector z = kz.apply(u);
    Vector rhs = z;
    rhs.insert(rhs.end(), c.begin(), c.end());
    if (!solve(lift, rhs)) return false;
  }
  return true;
}

}  // namespace ainf
