#pragma once

#include <string>
#include <vector>

#include "ainf/pushout.hpp"

namespace ainf {

struct HarnessConfig {
  RingSpec ring = RingSpec::rationals();
  TruncationConfig cfg;
  int max_layers = 3;
  bool parallel = true;
};

/// Default catalog: every named functor except the S(n), R(n), Q cells and
/// the to_A / to_terminal families.
std::vector<std::string> default_catalog_names();
std::vector<StrictFunctor> default_catalog(const RingSpec& ring);

/// Condition 1 (two-out-of-three, retracts), 2-3 (out of scope), 4 (J-cell
/// attachments are weak equivalences) and 5-6 (Surj = I-inj = J'-inj and W)
/// on the given catalog. A "catalog" report checks the functor axioms first.
std::vector<CheckReport> run_recognition(const HarnessConfig& hc, const std::vector<StrictFunctor>& catalog);
std::vector<CheckReport> run_recognition(const HarnessConfig& hc);

/// Coboundary of r1*g - g*r2 in K within leaf count <= 4, and the signs
/// that make the four printed monomials a preimage.
struct RemarkReplay {
  bool closed = false;
  std::optional<Element> preimage;
  std::vector<std::string> witness_terms;
  std::optional<Vector> witness_signs;
};
RemarkReplay remark_replay(const RingSpec& ring);

/// The explicit computations: DG cocycle, A-infinity divergence, remark
/// coboundary, split units of K_ainf, d^2 on builtins, disk acyclicity.
std::vector<CheckReport> run_paper_computations(const HarnessConfig& hc);

/// Sorted by id.
void sort_reports(std::vector<CheckReport>& reports);
/// JSON array of {id, status, witnesses, config: {ring, L, A, m}}.
std::string reports_to_json(const std::vector<CheckReport>& reports);
std::string reports_to_text(const std::vector<CheckReport>& reports);
bool any_failed(const std::vector<CheckReport>& reports);

}  // namespace ainf
