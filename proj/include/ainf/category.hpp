#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/complex.hpp"
#include "ainf/presentation.hpp"
#include "ainf/report.hpp"

namespace ainf {

/// Raised when a truncation window cannot support a computation, e.g. when
/// the differential of a window monomial leaves the window.
class WindowError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// A DG or strictly unital A-infinity category given by generators,
/// differentials on generators and (DG only) relations.
struct CategoryPresentation {
  std::string name;
  Kind kind = Kind::DG;
  RingSpec ring;
  GradedQuiver quiver;
  std::map<int, Element> diff;     // generator id -> d(generator); absent means closed
  std::vector<Element> relations;  // each element is set to zero

  /// d of a generator, as a typed element (zero when closed).
  Element d_of(int gen) const;
  /// Object index by label; throws AlgebraError if unknown.
  int object(const std::string& label) const;
  Element parse(const std::string& text) const { return parse_element(quiver, kind, ring, text); }
  std::string show(const Element& e) const { return element_to_string(quiver, e); }
};

CategoryPresentation builtin(const std::string& name, const RingSpec& ring);
/// Canonical builtin names; parameterised families are listed as C(n), P(n).
std::vector<std::string> builtin_names();

/// Text format with sections name:, kind:, objects:, generators:, diff:, relations:.
CategoryPresentation parse_presentation(const std::string& text, const RingSpec& ring);
std::string presentation_to_text(const CategoryPresentation& cat);

/// Filtration weights: closed generators weigh 1, others the largest term
/// weight of their differential (at least 1). The differential never raises
/// the weight of a monomial, so weight windows are differential-closed.
/// Falls back to 1 for every generator (leaf count) when the weights do not
/// stabilise; `fallback` reports that.
std::vector<int> generator_weights(const CategoryPresentation& cat, bool* fallback = nullptr);
int monomial_weight(const std::vector<int>& weights, const Monomial& m);

/// m^1 / d of an element: Leibniz rule on words, or the Stasheff identity
/// solved for m^1 o m^n on trees. Relations are not applied.
Element m1_expand(const CategoryPresentation& cat, const Element& e);
/// m^k of the category for k >= 1: composition/grafting for k >= 2
/// (zero for k >= 3 in the DG case).
Element m_k(const CategoryPresentation& cat, int k, const std::vector<Element>& args);

struct HomOptions {
  TruncationConfig cfg;
  /// Restrict to degrees [first, second]; the differential out of the top
  /// degree is then not computed.
  std::optional<std::pair<int, int>> degrees;
};

/// Truncated hom complex cat(x, y): monomials of weight <= max_word_length
/// (and arity <= max_arity), modulo relation multiples lying in the window.
class HomTruncation {
 public:
  int source = 0;
  int target = 0;
  HomOptions options;
  FiniteComplex result;
  std::map<std::string, Monomial> basis_dictionary;
  /// True when the window holds the whole hom space.
  bool exact_flag = false;

  const std::vector<Monomial>& basis(int k) const;
  /// Coordinates on the quotient basis of degree k, or nullopt when the
  /// element has support outside the window.
  std::optional<Vector> coordinates(const Element& e) const;
  Element element_of(int k, const Vector& v) const;
  bool contains(const Monomial& m) const;
  /// Reduce modulo the relation span; nullopt outside the window.
  std::optional<Element> reduce(const Element& e) const;

  struct DegreeData;
  std::map<int, std::shared_ptr<const DegreeData>> data;
  Kind kind = Kind::DG;
  RingSpec ring;
  std::vector<int> weights;
  const GradedQuiver* quiver_for_printing = nullptr;
};

/// Throws WindowError if the window is not closed under the differential or
/// the relation span does not admit a free quotient (over Z).
std::shared_ptr<const HomTruncation> hom_complex(const CategoryPresentation& cat, int x, int y,
                                                 const HomOptions& options);
std::shared_ptr<const HomTruncation> hom_complex(const CategoryPresentation& cat, int x, int y,
                                                 const TruncationConfig& cfg);

/// Classes of degree-k cycles of a small window modulo boundaries of a
/// larger one (equal windows give ordinary homology).
class HomClasses {
 public:
  HomClasses(std::shared_ptr<const HomTruncation> small, std::shared_ptr<const HomTruncation> big, int k);
  int free_rank() const { return static_cast<int>(reps_.size()); }
  const std::vector<Scalar>& torsion() const { return torsion_; }
  ModuleDescription description() const { return {free_rank(), torsion_}; }
  /// Representatives of a basis of the free part.
  const std::vector<Element>& representatives() const { return reps_; }
  /// Free coordinates of a cycle; nullopt if it is not (cohomologous to)
  /// a small-window cycle or lies outside the big window.
  std::optional<Vector> class_of(const Element& z) const;
  /// z is cohomologous to zero (up to torsion) using big-window boundaries.
  bool is_trivial(const Element& z) const;
  const HomTruncation& small() const { return *small_; }
  const HomTruncation& big() const { return *big_; }

 private:
  Element monomial_element_typed(int j) const;
  void prefer_light_representatives(const Matrix& zs);

  std::shared_ptr<const HomTruncation> small_, big_;
  int k_;
  Matrix zs_;        // small cycles (columns, big coordinates)
  Matrix boundary_;  // big boundaries (columns)
  Matrix coord_;     // free coordinates from cycle-lattice coordinates
  std::vector<Element> reps_;
  std::vector<Scalar> torsion_;
};

/// Degree-zero cohomology category within windows (elements of weight
/// <= cfg.max_word_length, boundaries from the larger `big` window).
class H0Category {
 public:
  H0Category(const CategoryPresentation& cat, const TruncationConfig& cfg, const TruncationConfig& big);

  const CategoryPresentation& category() const { return cat_; }
  int object_count() const { return static_cast<int>(cat_.quiver.objects().size()); }
  const HomClasses& hom(int x, int y) const;
  ModuleDescription description(int x, int y) const { return hom(x, y).description(); }
  /// Class of the composite b o a of classes (free coordinates).
  std::optional<Vector> compose(int x, int y, int z, const Vector& a, const Vector& b) const;
  Element element_of(int x, int y, const Vector& coords) const;
  /// Whether the class of the cycle g : x -> y is invertible; the inverse
  /// class coordinates are returned when it is.
  std::optional<Vector> inverse(int x, int y, const Element& g) const;
  bool exact() const { return exact_; }
  const TruncationConfig& cfg() const { return cfg_; }
  const TruncationConfig& big_cfg() const { return big_; }

 private:
  CategoryPresentation cat_;
  TruncationConfig cfg_, big_;
  bool exact_ = true;
  std::map<std::pair<int, int>, std::shared_ptr<HomClasses>> homs_;
};

H0Category h0(const CategoryPresentation& cat, const TruncationConfig& cfg);
/// Default enlarged window used for boundaries and composites.
TruncationConfig enlarged(const CategoryPresentation& cat, const TruncationConfig& cfg);

/// Normal form modulo the relation span inside a window holding every term
/// of e; nullopt when that window cannot be built.
std::optional<Element> reduce_relations(const CategoryPresentation& cat, const Element& e,
                                       const TruncationConfig& cfg = {});

/// d^2 = 0 on generators (DG) or Stasheff identities on window tuples
/// (A-infinity), relation closure, and strict-unit laws.
CheckReport check_structure(const CategoryPresentation& cat, const TruncationConfig& cfg);

/// The unit at x splits off: some p : cat(x,x)^0 -> R with p(1) = 1 and
/// p o d = 0, within the window.
bool split_unit_check(const CategoryPresentation& cat, int x, const TruncationConfig& cfg = {});

/// Stasheff identity violations over all composable tuples of window
/// monomials (units included) with at most cfg.max_arity entries and
/// cfg.max_word_length leaves in total. `parallel` selects the OpenMP kernel;
/// the serial path is the reference. `tuples` receives the tuple count.
std::vector<std::string> stasheff_violations(const CategoryPresentation& cat, const TruncationConfig& cfg,
                                             bool parallel = true, long* tuples = nullptr);

/// All normal-form monomials from x to y of weight <= L (and arity <= A for
/// trees), sorted by (weight, leaves, code); units included when x == y.
std::vector<Monomial> window_monomials(const CategoryPresentation& cat, const std::vector<int>& weights, int x,
                                       int y, const TruncationConfig& cfg);

/// Monomial order used for relation pivots: weight, then leaf count, then code.
bool monomial_less(const std::vector<int>& weights, const Monomial& a, const Monomial& b);

}  // namespace ainf
