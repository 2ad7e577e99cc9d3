#include <doctest.h>

#include "ainf/harness.hpp"

using namespace ainf;

namespace {

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  FAIL("missing report " << id);
  return rs.front();
}

}  // namespace

TEST_CASE("status names") {
  CHECK(status_name(Status::Pass) == "pass");
  CHECK(status_name(Status::Fail) == "fail");
  CHECK(status_name(Status::ApproximatePass) == "approximate-pass");
  CHECK(status_name(Status::OutOfScope) == "out-of-scope");
}

TEST_CASE("recognition run on the default catalog") {
  HarnessConfig hc;
  auto rs = run_recognition(hc);
  for (size_t i = 1; i < rs.size(); ++i) CHECK(rs[i - 1].id <= rs[i].id);
  for (const auto& r : rs)
    if (r.status == Status::Fail) CHECK_FALSE(r.witnesses.empty());
  CHECK(find(rs, "catalog").status == Status::Pass);
  CHECK(find(rs, "RT-1-two-out-of-three").passed());
  CHECK(find(rs, "RT-1-retract").passed());
  CHECK(find(rs, "RT-2-smallness-I").status == Status::OutOfScope);
  CHECK(find(rs, "RT-3-smallness-J").status == Status::OutOfScope);
  CHECK(find(rs, "RT-5/6-Surj-identity").passed());
  for (const auto& r : rs)
    if (r.id.rfind("RT-4-Jcell-weq:R(", 0) == 0) CHECK(r.status == Status::Pass);
  CHECK(find(rs, "RT-4-Jcell-weq:F_dg@A[z=3]").status == Status::ApproximatePass);
  // K_ainf(1,1) keeps an H^-1 class, so the F' attachment is not a weak equivalence.
  CHECK(find(rs, "RT-4-Jcell-weq:F_prime@A[z=3]").status == Status::Fail);
}

TEST_CASE("B -> I inclusion sits outside Surj and I-inj consistently") {
  HarnessConfig hc;
  auto rs = run_recognition(hc, {catalog_functor("iota", hc.ring), catalog_functor("pi_I", hc.ring)});
  const auto& r = find(rs, "RT-5/6-Surj-identity");
  CHECK(r.status == Status::Pass);
  CHECK(r.witnesses[0] == "iota: Surj no, I-inj no, J'-inj and W no");
}

TEST_CASE("a corrupted catalog fails with a functor axiom witness") {
  HarnessConfig hc;
  auto psi = catalog_functor("Psi", hc.ring);
  psi.generator_map[psi.source.quiver.generator_index("r12")] = psi.target.parse("id@1");
  auto rs = run_recognition(hc, {psi, catalog_functor("pi_I", hc.ring)});
  const auto& c = find(rs, "catalog");
  CHECK(c.status == Status::Fail);
  REQUIRE_FALSE(c.witnesses.empty());
  CHECK(c.witnesses[0].rfind("Psi: ", 0) == 0);
  CHECK(any_failed(rs));
}

TEST_CASE("explicit computations") {
  for (const auto& ring : {RingSpec::rationals(), RingSpec::integers(), RingSpec::prime_field(2)}) {
    HarnessConfig hc;
    hc.ring = ring;
    auto rs = run_paper_computations(hc);
    CHECK(rs.size() == 6);
    for (const auto& r : rs) {
      INFO(r.id);
      CHECK(r.passed());
    }
  }
  auto rr = remark_replay(RingSpec::rationals());
  CHECK(rr.closed);
  REQUIRE(rr.preimage);
  REQUIRE(rr.witness_signs);
  CHECK(*rr.witness_signs == Vector{-1, 1, -1, -1});
}

TEST_CASE("json reports are stable") {
  HarnessConfig hc;
  auto a = run_paper_computations(hc);
  auto b = run_paper_computations(hc);
  CHECK(reports_to_json(a) == reports_to_json(b));
  auto j = reports_to_json(a);
  CHECK(j.find("\"id\": \"computation-i-dg-cocycle\"") != std::string::npos);
  CHECK(j.find("\"config\"") != std::string::npos);
  CHECK(j.find("\"L\": 6") != std::string::npos);
  CHECK(reports_to_text(a).find("[pass] computation-i-dg-cocycle") != std::string::npos);
}
