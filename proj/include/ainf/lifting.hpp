#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ainf/functor.hpp"

namespace ainf {

struct GeneratingMap {
  enum class Tag { Q, S, R, F_dg, F_prime, J_disk };
  Tag tag = Tag::Q;
  int n = 0;

  /// "Q", "S(n)", "R(n)", "F_dg", "F_prime", "J_disk(n)".
  std::string name() const;
  static GeneratingMap parse(const std::string& text);
  bool operator==(const GeneratingMap& o) const { return tag == o.tag && n == o.n; }
};

/// The functor behind a generating map. J_disk(n) lives at the chain level
/// and has no functor; it throws AlgebraError.
StrictFunctor generating_functor(const GeneratingMap& g, const RingSpec& ring);

/// Degrees n probed for the S(n), R(n) families.
std::vector<int> probe_degrees();

/// Sphere-to-disk lifting for every hom pair: each small-window n-cycle z
/// of the source with d b = F(z) for some b in the target window has an
/// e in the enlarged source window with d e = z and F(e) = b.
Verdict sphere_disk_lifting(const StrictFunctor& f, int n, const TruncationConfig& cfg = {});

/// Characterisation-based right lifting property:
///   Q        surjective on objects
///   R(n)     surjective on morphisms of degree n - 1
///   S(n)     sphere_disk_lifting
///   F_dg, F_prime  isofibration
///   J_disk(n)      degreewise surjectivity in degree n - 1 of each hom component
Verdict has_rlp(const StrictFunctor& f, const GeneratingMap& g, const TruncationConfig& cfg = {});

/// left : X -> Y, right : C -> D, top : X -> C, bottom : Y -> D.
struct LiftingSquare {
  StrictFunctor left, top, bottom, right;
};
LiftingSquare make_square(const GeneratingMap& g, const StrictFunctor& top, const StrictFunctor& bottom,
                          const StrictFunctor& right);
/// right o top = bottom o left on objects and generators.
CheckReport check_square(const LiftingSquare& sq, const TruncationConfig& cfg = {});

struct LiftResult {
  enum class Outcome { Found, NoneFound, BudgetExhausted };
  Outcome outcome = Outcome::NoneFound;
  std::optional<StrictFunctor> lift;
  long explored = 0;
};
std::string outcome_name(LiftResult::Outcome o);

/// Exhaustive search for a diagonal Y -> C over a finite field: object maps
/// are enumerated, degree-0 generator images range over preimages in the
/// enlarged window, and the remaining generator images solve one linear
/// system. Found lifts pass check_functor and both triangles.
LiftResult brute_force_lift(const LiftingSquare& sq, long budget, const TruncationConfig& cfg = {3, 4});

/// All commuting squares against `right` with top and bottom generator
/// images in the cfg windows. Returns false when `budget` squares were
/// produced before the enumeration finished.
bool enumerate_squares(const GeneratingMap& g, const StrictFunctor& right, const TruncationConfig& cfg, long budget,
                       const std::function<bool(const LiftingSquare&)>& visit);

struct OracleResult {
  LiftResult::Outcome outcome = LiftResult::Outcome::Found;  // Found: every square lifts
  long squares = 0;
  std::optional<LiftingSquare> counterexample;
  bool lifts() const { return outcome == LiftResult::Outcome::Found; }
};
/// Brute-force RLP: every enumerated square is handed to brute_force_lift.
OracleResult oracle_rlp(const StrictFunctor& right, const GeneratingMap& g, long budget,
                        const TruncationConfig& cfg = {3, 4});

struct Classification {
  Verdict fibration, trivial_fibration, weak_equivalence;
};
/// Windows used for classification: functors touching an A-infinity
/// category are capped at word length 4.
TruncationConfig classification_config(const StrictFunctor& f, const TruncationConfig& cfg);
Classification classify(const StrictFunctor& f, const TruncationConfig& cfg = {});

struct SweepCell {
  std::string functor;
  std::string map;
  bool characterization = false;
  OracleResult oracle;
  bool agree() const { return oracle.outcome != LiftResult::Outcome::BudgetExhausted && oracle.lifts() == characterization; }
};
/// has_rlp against the oracle on every (functor, map) cell. The parallel
/// kernel distributes cells over OpenMP threads; the serial path is the
/// reference. Output order is the cell order either way.
std::vector<SweepCell> oracle_sweep(const std::vector<StrictFunctor>& functors, const std::vector<GeneratingMap>& maps,
                                    long budget, const TruncationConfig& rlp_cfg, const TruncationConfig& oracle_cfg,
                                    bool parallel = true);

std::vector<Classification> classify_all(const std::vector<StrictFunctor>& functors, const TruncationConfig& cfg,
                                         bool parallel = true);

}  // namespace ainf
