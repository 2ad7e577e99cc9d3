#pragma once

#include <map>
#include <set>
#include <string>

#include "ainf/lifting.hpp"

namespace ainf {

/// Pushout of the generating map `cell` : X -> Y along top : X -> base.
struct GluedCategory {
  CategoryPresentation base;
  GeneratingMap cell;
  StrictFunctor top;     // X -> base
  CategoryPresentation result;
  StrictFunctor inc;     // base -> result
  StrictFunctor corner;  // Y -> result
  std::set<int> cell_generators;  // generator ids of result coming from Y
  std::set<int> new_objects;      // object ids of result coming from Y
};

/// Attachment text: comma separated `label=value`, where label is an object
/// or generator of the cell source and value an object label or element of
/// the base. A one-object source also accepts `z=<object>`, a two-object
/// source `x=<object>,y=<object>`.
StrictFunctor parse_attachment(const GeneratingMap& cell, const CategoryPresentation& base, const std::string& text);

/// Objects: base plus the objects of Y outside the image of X. Generators:
/// base plus those of Y outside the image of X, with differentials pushed
/// forward. Throws AlgebraError on invalid attachment data.
GluedCategory pushout(const CategoryPresentation& base, const GeneratingMap& cell, const StrictFunctor& top);
GluedCategory pushout(const CategoryPresentation& base, const GeneratingMap& cell, const std::string& attachment);

struct LayeredHom {
  std::map<int, FiniteComplex> layers;  // m -> P^(m)(x, y)
  FiniteComplex assembly;               // direct sum over 0 <= m <= m_max
  bool approximate = false;             // some factor window is not exact
};

/// Layers as alternating tensor products of base homs and cell factors:
///   R(n):          M(y0,y) (D^n M(y0,x0))^(m-1) D^n M(x,x0)
///   F_dg, F_prime: M(z,y) (Kbar M(z,z))^(m-1) Kbar M(x,z)
/// with Kbar the cell endomorphism window modulo its unit. Q cells have
/// layer 0 only. x, y are base objects.
LayeredHom layered_hom(const GluedCategory& g, int x, int y, int m_max, const TruncationConfig& cfg = {});

/// Explicit contracting homotopy of an R(n) layer built from the one of D^n.
Homotopy layer_homotopy(const GluedCategory& g, int x, int y, int m, const TruncationConfig& cfg = {});

/// Monomials of the result window of (x, y) sorted by the number of cell
/// generators they contain; the differential must preserve the count.
/// Throws AlgebraError when it does not (only R(n) and Q cells qualify).
std::map<int, FiniteComplex> presentation_layers(const GluedCategory& g, int x, int y, const TruncationConfig& cfg);

/// inc is a quasi-isomorphism on every base hom (layers m >= 1 acyclic) and,
/// for F cells, the new object is isomorphic in H^0 to its glue partner.
/// R(n) layers are certified by explicit homotopies; F cells only within
/// windows (approximate-pass at best).
CheckReport check_inc_quasi_iso(const GluedCategory& g, int m_max, const TruncationConfig& cfg = {});

}  // namespace ainf
