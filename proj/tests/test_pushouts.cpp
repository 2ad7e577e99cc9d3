#include <doctest.h>

#include "ainf/pushout.hpp"

using namespace ainf;

namespace {

const RingSpec kQ = RingSpec::rationals();
const RingSpec kZ = RingSpec::integers();

std::map<int, ModuleDescription> nonzero(const FiniteComplex& c) {
  auto h = homology_all(c);
  std::erase_if(h, [](const auto& p) { return p.second.is_zero(); });
  return h;
}

GeneratingMap gm(const std::string& s) { return GeneratingMap::parse(s); }

}  // namespace

TEST_CASE("Q adds a free object") {
  auto g = pushout(builtin("A", kQ), gm("Q"), "");
  CHECK(g.result.quiver.objects().size() == 2);
  CHECK(g.new_objects.size() == 1);
  CHECK(g.result.quiver.objects()[1] == "3'");
  CHECK(check_functor(g.inc).status == Status::Pass);
  CHECK(check_functor(g.corner).status == Status::Pass);
  auto rep = check_inc_quasi_iso(g, 3);
  CHECK(rep.status == Status::Pass);
}

TEST_CASE("R(n) cells add a disk between base objects") {
  for (int n : {0, 1, -1}) {
    auto g = pushout(builtin("I", kQ), gm("R(" + std::to_string(n) + ")"), "x=1,y=2");
    CHECK(g.result.quiver.generators().size() == 4);
    CHECK(g.cell_generators.size() == 2);
    CHECK(check_functor(g.corner).status == Status::Pass);
    auto rep = check_inc_quasi_iso(g, 3);
    INFO(rep.witnesses.front());
    CHECK(rep.status == Status::Pass);
  }
  auto a = pushout(builtin("A", kZ), gm("R(2)"), "x=3,y=3");
  CHECK(a.new_objects.empty());
  CHECK(check_inc_quasi_iso(a, 3).status == Status::Pass);
}

TEST_CASE("layer homotopies contract the tensor layers") {
  auto g = pushout(builtin("I", kQ), gm("R(0)"), "x=2,y=1");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      auto lh = layered_hom(g, x, y, 3);
      CHECK_FALSE(lh.approximate);
      CHECK(lh.layers.size() == 4);
      CHECK(lh.layers[2].total_dim() == 4);
      for (int m = 1; m <= 3; ++m) {
        CHECK(is_acyclic(lh.layers[m]));
        CHECK(verify_contracting_homotopy(lh.layers[m], layer_homotopy(g, x, y, m)));
      }
      CHECK(nonzero(lh.assembly) == nonzero(lh.layers[0]));
    }
}

TEST_CASE("presentation words split by cell count and match the tensor layers") {
  auto g = pushout(builtin("A", kQ), gm("R(1)"), "x=3,y=3");
  TruncationConfig cfg{4, 4};
  auto pl = presentation_layers(g, 0, 0, cfg);
  auto lh = layered_hom(g, 0, 0, 3, cfg);
  for (int m = 0; m <= 2; ++m) {
    REQUIRE(pl.count(m));
    for (int k = -2; k <= 3; ++k) CHECK(pl[m].dim(k) == lh.layers[m].dim(k));
  }
}

TEST_CASE("F cells") {
  auto dg = pushout(builtin("A", kQ), gm("F_dg"), "z=3");
  CHECK(dg.new_objects.size() == 1);
  CHECK(dg.result.quiver.generators().size() == 5);
  CHECK(check_functor(dg.corner, {4, 4}).status == Status::Pass);
  auto rep = check_inc_quasi_iso(dg, 2, {4, 4});
  CHECK(rep.status == Status::ApproximatePass);
  CHECK_THROWS_AS(presentation_layers(dg, 0, 0, {4, 4}), AlgebraError);

  auto ai = pushout(builtin("A", kQ), gm("F_prime"), "3=3");
  CHECK(ai.result.kind == Kind::Ainf);
  auto bad = check_inc_quasi_iso(ai, 2, {4, 4});
  CHECK(bad.status == Status::Fail);
  bool minus_one = false;
  for (const auto& w : bad.witnesses) minus_one = minus_one || w.find("H^-1") != std::string::npos;
  CHECK(minus_one);
}

TEST_CASE("invalid attachments") {
  auto i = builtin("I", kQ);
  CHECK_THROWS_AS(pushout(i, gm("R(0)"), "x=1"), ParseError);
  CHECK_THROWS_AS(pushout(i, gm("R(0)"), "x=1,y=9"), ParseError);
  CHECK_THROWS_AS(pushout(i, gm("R(0)"), "x=1,y=2,q=3"), ParseError);
  CHECK_THROWS_AS(pushout(i, gm("F_dg"), "z"), ParseError);
  CHECK_THROWS_AS(pushout(builtin("K_ainf", kQ), gm("F_dg"), "z=1"), AlgebraError);
  CHECK_THROWS_AS(pushout(i, gm("F_prime"), "z=1"), AlgebraError);
  auto s = pushout(builtin("A", kQ), gm("S(1)"), "x=3,y=3,s=0");
  CHECK_THROWS_AS(layered_hom(s, 0, 0, 1), AlgebraError);
}
