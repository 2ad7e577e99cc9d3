#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ainf/category.hpp"

namespace ainf {

/// Strict functor: an object map and one degree-0 component determined by
/// the images of the source generators.
struct StrictFunctor {
  std::string name;
  CategoryPresentation source;
  CategoryPresentation target;
  std::vector<int> object_map;
  std::map<int, Element> generator_map;  // missing entries map to zero

  /// Image of a source element as an element of the free target (relations
  /// are not applied). Words go to composites, trees to m^k of the images.
  Element apply(const Element& e) const;
  Element image_of_generator(int gen) const;
  const RingSpec& ring() const { return source.ring; }
};

/// Answer of a window-based predicate. `exact` is false when a window was
/// not exact or a search was not exhaustive.
struct Verdict {
  bool value = false;
  bool exact = true;
  std::vector<std::string> witnesses;
  explicit operator bool() const { return value; }
};

StrictFunctor identity_functor(const CategoryPresentation& c);
/// g o f; throws AlgebraError unless f.target and g.source agree.
StrictFunctor compose(const StrictFunctor& g, const StrictFunctor& f);
/// Degree-0 generators go to the unit of the single object of `a`, all
/// other generators to zero.
StrictFunctor collapse_functor(const CategoryPresentation& c, const CategoryPresentation& a);
/// Everything to the zero object of the builtin `terminal`.
StrictFunctor terminal_functor(const CategoryPresentation& c);

/// Named functors: Psi, Psi0, Psi1, Psi2, Psi_ainf, iota, pi_I, pi_B, pi_K,
/// F_dg, F_prime, Q, S(n), R(n), id:<builtin>, to_A:<builtin>,
/// to_terminal:<builtin>.
StrictFunctor catalog_functor(const std::string& name, const RingSpec& ring);
std::vector<std::string> catalog_functor_names();

/// `functor:` section format with source:/target: (builtin:NAME or a
/// file path relative to base_dir), `object: a -> b` and `gen: f -> elem`.
StrictFunctor parse_functor(const std::string& text, const RingSpec& ring, const std::string& base_dir = ".");
std::string functor_to_text(const StrictFunctor& f);

/// Endpoint and degree compatibility of the generator images, F o m1 = m1 o F
/// on generators and vanishing of the images of relations.
CheckReport check_functor(const StrictFunctor& f, const TruncationConfig& cfg = {});

/// a == b in the target category (modulo relations).
bool equal_in(const CategoryPresentation& c, const Element& a, const Element& b, const TruncationConfig& cfg = {});

/// Window sizes used for images: the largest weight factor of a generator
/// image, so that F maps a weight-L window into a weight s*L one.
int stretch(const StrictFunctor& f);
TruncationConfig image_config(const StrictFunctor& f, const TruncationConfig& cfg);

/// Matrix of F from source window degree k into target window coordinates.
/// Columns whose images leave the target window are zero and counted in
/// `escaped`.
Matrix hom_map_matrix(const StrictFunctor& f, const HomTruncation& src, const HomTruncation& tgt, int k,
                      int* escaped = nullptr);

Verdict is_surjective_on_objects(const StrictFunctor& f);
/// F : C(x,y)^k -> D(Fx,Fy)^k onto the target window for all object pairs,
/// using the enlarged source window for preimages. All degrees of the
/// target windows when `degree` is empty.
Verdict is_surjective_on_morphisms(const StrictFunctor& f, const TruncationConfig& cfg = {},
                                   std::optional<int> degree = std::nullopt);

/// Invertible classes of H^0(x, y). Over F_p with few classes the list is
/// complete; otherwise basis representatives and small combinations are
/// probed and `exhaustive` is false (rank <= 1 over Q is still complete up
/// to scaling).
struct InvertibleClasses {
  std::vector<Vector> classes;
  bool exhaustive = true;
};
InvertibleClasses invertible_classes(const H0Category& h, int x, int y);

Verdict is_isofibration(const StrictFunctor& f, const TruncationConfig& cfg = {});
/// Every hom component is a quasi-isomorphism (small-window cycles modulo
/// enlarged-window boundaries on both sides) and H^0(F) is essentially
/// surjective.
Verdict is_quasi_equivalence(const StrictFunctor& f, const TruncationConfig& cfg = {});

}  // namespace ainf
