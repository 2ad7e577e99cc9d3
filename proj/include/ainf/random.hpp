#pragma once

#include <random>

#include "ainf/complex.hpp"

namespace ainf {

/// Small random complexes for property sweeps: direct sums of spheres,
/// disks and (over Z) torsion pieces R --m--> R, conjugated degreewise by
/// random invertible matrices.
FiniteComplex random_complex(std::mt19937& rng, const RingSpec& ring, int lo = 0, int hi = 3);

/// A random chain map a -> b: a small combination of a basis of the
/// module of all chain maps.
ChainMap random_chain_map(std::mt19937& rng, const FiniteComplex& a, const FiniteComplex& b);

/// A random pair for quasi-isomorphism sweeps. About half of the maps are
/// built to be quasi-isomorphisms (inclusions into a sum with disks,
/// perturbed by a null-homotopic map); the rest are arbitrary chain maps.
ChainMap random_sweep_map(std::mt19937& rng, const RingSpec& ring);

}  // namespace ainf
