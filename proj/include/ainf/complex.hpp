#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ainf/matrix.hpp"

namespace ainf {

/// Bounded cochain complex of finitely generated free modules. The
/// differential raises degree by one; diff(k) maps degree k to degree k+1,
/// so its shape is dim(k+1) x dim(k).
class FiniteComplex {
 public:
  FiniteComplex() = default;
  explicit FiniteComplex(RingSpec ring) : ring_(std::move(ring)) {}
  /// Throws AlgebraError on shape mismatch or d^2 != 0.
  FiniteComplex(RingSpec ring, std::map<int, std::vector<std::string>> basis,
                std::map<int, Matrix> diff);

  const RingSpec& ring() const { return ring_; }
  const std::map<int, std::vector<std::string>>& basis() const { return basis_; }
  const std::vector<std::string>& labels(int k) const;
  int dim(int k) const;
  int total_dim() const;
  /// Zero matrix of the right shape when nothing is stored.
  Matrix d(int k) const;
  /// Degrees carrying a nonempty basis, ascending.
  std::vector<int> degrees() const;

  void validate() const;
  std::string to_string() const;

 private:
  RingSpec ring_;
  std::map<int, std::vector<std::string>> basis_;
  std::map<int, Matrix> diff_;
};

/// components[k] maps source degree k to target degree k.
struct ChainMap {
  FiniteComplex source;
  FiniteComplex target;
  std::map<int, Matrix> components;

  Matrix at(int k) const;
  /// Throws AlgebraError unless f d = d f in every degree.
  void validate() const;

  static ChainMap identity(const FiniteComplex& c);
  static ChainMap zero(const FiniteComplex& a, const FiniteComplex& b);
};

/// Finitely generated module: R^free_rank plus cyclic torsion summands.
struct ModuleDescription {
  int free_rank = 0;
  std::vector<Scalar> torsion;  // invariant factors > 1, divisibility chain

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const ModuleDescription& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  bool operator!=(const ModuleDescription& o) const { return !(*this == o); }
  std::string to_string(const RingSpec& ring) const;
};

/// h[k] : C^k -> C^{k-1}, stored with shape dim(k-1) x dim(k).
using Homotopy = std::map<int, Matrix>;

FiniteComplex sphere(int n, const RingSpec& ring);
/// R in degrees n-1 and n joined by the identity.
FiniteComplex disk(int n, const RingSpec& ring);
/// C[s]^k = C^{k+s}, differential multiplied by (-1)^s.
FiniteComplex shift(const FiniteComplex& c, int s);

ModuleDescription homology(const FiniteComplex& c, int k);
/// Homology in every degree where c or a neighbour is nonzero.
std::map<int, ModuleDescription> homology_all(const FiniteComplex& c);
bool is_acyclic(const FiniteComplex& c);

/// cone(f)^k = A^{k+1} + B^k with d(x, y) = (-d x, f x + d y).
FiniteComplex cone(const ChainMap& f);
/// Degree-additive tensor product; d(x y) = dx y + (-1)^{|x|} x dy.
FiniteComplex tensor(const FiniteComplex& a, const FiniteComplex& b);

/// Induced map on homology is bijective in every degree. Decided without
/// the cone: equal module types plus surjectivity of H(f).
bool is_quasi_iso(const ChainMap& f);
/// Induced map on H^k is onto.
bool homology_surjective(const ChainMap& f, int k);

/// A contracting homotopy (d h + h d = id) or nullopt when none exists.
std::optional<Homotopy> contracting_homotopy(const FiniteComplex& c);
bool is_contractible(const FiniteComplex& c);
bool verify_contracting_homotopy(const FiniteComplex& c, const Homotopy& h);

/// Homotopies on a tensor product induced by one on a factor:
/// H(x y) = h(x) y, or H(x y) = (-1)^{|x|} x h(y).
Homotopy tensor_homotopy_left(const FiniteComplex& a, const Homotopy& ha, const FiniteComplex& b);
Homotopy tensor_homotopy_right(const FiniteComplex& a, const FiniteComplex& b, const Homotopy& hb);

/// Rank of the image of the span of `cycles` (columns, assumed closed) in
/// homology, where `boundaries` spans the boundary module. Field rank, or
/// rational rank over Z.
int image_rank_in_homology(const Matrix& cycles, const Matrix& boundaries);

/// Chain-level lifting properties of p : E -> B against 0 -> D^n and S^n -> D^n.
bool chain_rlp_disk(const ChainMap& p, int n);
bool chain_rlp_sphere_disk(const ChainMap& p, int n);

/// Matrix with the given vectors as columns.
Matrix columns_matrix(const RingSpec& ring, int rows, const std::vector<Vector>& cols);

}  // namespace ainf
