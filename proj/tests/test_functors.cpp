#include <doctest.h>

#include "ainf/lifting.hpp"

using namespace ainf;

namespace {

const RingSpec kZ = RingSpec::integers();
const RingSpec kQ = RingSpec::rationals();
const RingSpec kF2 = RingSpec::prime_field(2);

StrictFunctor with_image(StrictFunctor f, const std::string& gen, const std::string& image) {
  f.generator_map[f.source.quiver.generator_index(gen)] = f.target.parse(image);
  return f;
}

struct Expected {
  const char* name;
  bool fib, triv, weq;
};

const std::vector<Expected> kTable{
    {"Psi", true, true, true},      {"id:I", true, true, true},      {"iota", false, false, false},
    {"pi_I", true, true, true},     {"pi_B", false, false, false},   {"Psi0", false, false, false},
    {"Psi1", false, false, false},  {"Psi2", true, false, false},    {"pi_K", true, true, true},
    {"F_dg", false, false, true},   {"Psi_ainf", true, false, false}, {"F_prime", false, false, false},
};

const std::vector<std::string> kOracleCatalog{"Psi", "id:I", "iota", "pi_I", "pi_B", "Psi1", "Psi2", "pi_K"};

}  // namespace

TEST_CASE("catalog functors are strict functors") {
  for (const auto& ring : {kZ, kQ, kF2}) {
    std::vector<std::string> names{"Psi",  "Psi0", "Psi1", "Psi2", "Psi_ainf", "iota", "pi_I", "pi_B", "pi_K",
                                   "F_dg", "F_prime", "Q", "S(0)", "S(1)", "S(-2)", "R(0)", "R(3)"};
    for (const auto& b : builtin_names()) {
      if (b == "C(n)" || b == "P(n)") continue;
      names.push_back("id:" + b);
      names.push_back("to_terminal:" + b);
      if (b != "E" && b != "terminal") names.push_back("to_A:" + b);
    }
    for (const auto& n : names) {
      CAPTURE(n);
      auto rep = check_functor(catalog_functor(n, ring));
      CHECK(rep.status == Status::Pass);
    }
    // the unit of the zero category is zero, so it has no functor to A
    CHECK(check_functor(catalog_functor("to_A:terminal", ring)).status == Status::Fail);
  }
}

TEST_CASE("corrupted Psi fails with a differential witness") {
  auto psi = catalog_functor("Psi", kQ);
  for (const auto& gen : {"r1", "r12"}) {
    auto rep = check_functor(with_image(psi, gen, "id@1"));
    REQUIRE(rep.status == Status::Fail);
    CHECK(rep.witnesses.front().find(gen) != std::string::npos);
  }

  // f |-> 0 breaks d(r1) = g f - 1
  auto rep = check_functor(with_image(psi, "f", "0"));
  CHECK(rep.status == Status::Fail);
}

TEST_CASE("composition and identities") {
  auto psi = catalog_functor("Psi", kQ);
  auto id = identity_functor(psi.source);
  auto c = compose(psi, id);
  for (const auto& [g, e] : psi.generator_map) CHECK(equal_in(psi.target, c.image_of_generator(g), e));
  CHECK_THROWS_AS(compose(psi, psi), AlgebraError);
  auto pi = catalog_functor("pi_I", kQ);
  auto pp = compose(pi, psi);
  CHECK(check_functor(pp).status == Status::Pass);
  CHECK(pp.object_map == std::vector<int>{0, 0});
}

TEST_CASE("surjectivity on morphisms") {
  CHECK(is_surjective_on_morphisms(catalog_functor("Psi", kQ)).value);
  CHECK(is_surjective_on_morphisms(catalog_functor("Psi1", kQ)).value);
  CHECK(is_surjective_on_morphisms(catalog_functor("Psi2", kZ)).value);
  CHECK_FALSE(is_surjective_on_morphisms(catalog_functor("iota", kQ)).value);
  // B(4,5) = 0 cannot reach the unit of A
  auto pb = is_surjective_on_morphisms(catalog_functor("pi_B", kQ));
  CHECK_FALSE(pb.value);
  CHECK_FALSE(pb.witnesses.empty());
  CHECK(is_surjective_on_morphisms(catalog_functor("to_A:I", kQ)).value);

  // s |-> 2s is onto over Q only
  for (const auto& ring : {kZ, kQ, kF2}) {
    auto c = builtin("C(0)", ring);
    auto twice = identity_functor(c);
    twice.generator_map[0] = c.parse("2*s");
    bool expect = ring.kind() == RingSpec::Kind::Rationals;
    CHECK(is_surjective_on_morphisms(twice).value == expect);
  }
}

TEST_CASE("isofibrations") {
  auto psi = is_isofibration(catalog_functor("Psi", kQ));
  CHECK(psi.value);
  auto iota = is_isofibration(catalog_functor("iota", kQ));
  CHECK_FALSE(iota.value);
  CHECK_FALSE(iota.witnesses.empty());
  for (const auto& b : {"B", "I", "K", "I2_dg"}) CHECK(is_isofibration(catalog_functor(std::string("to_A:") + b, kQ)).value);
  CHECK(is_isofibration(catalog_functor("to_A:K_ainf", kQ), {4, 4}).value);
  CHECK_FALSE(is_isofibration(catalog_functor("Psi1", kQ)).value);
  CHECK(is_isofibration(catalog_functor("Psi2", kF2)).value);
}

TEST_CASE("quasi-equivalences") {
  CHECK(is_quasi_equivalence(catalog_functor("Psi", kZ)).value);
  CHECK(is_quasi_equivalence(identity_functor(builtin("K", kQ))).value);
  auto iota = is_quasi_equivalence(catalog_functor("iota", kQ));
  CHECK_FALSE(iota.value);
  CHECK_FALSE(iota.witnesses.empty());
  CHECK_FALSE(is_quasi_equivalence(catalog_functor("Psi2", kQ)).value);
  CHECK(is_quasi_equivalence(catalog_functor("F_dg", kQ)).value);
}

TEST_CASE("K_ainf leaves a class that I does not have") {
  // A functor to E = (x, rho of degree -1, rho*rho = 0) detects the class of
  // g o (m3(f,g,f) - m2(f,r1) + m2(r2,f)) in K_ainf(1,1)^-1.
  for (const auto& ring : {kQ, kZ, kF2}) {
    CAPTURE(ring.name());
    auto e = builtin("E", ring);
    StrictFunctor det;
    det.name = "detect";
    det.source = builtin("K_ainf", ring);
    det.target = e;
    det.object_map = {0, 0};
    det = with_image(det, "f", "id@x");
    det = with_image(det, "g", "id@x");
    det = with_image(det, "r2", "rho");
    REQUIRE(check_functor(det).status == Status::Pass);
    const auto& k = det.source;
    auto c = k.parse("m3(f,g,f) - m2(f,r1) + m2(r2,f)");
    CHECK(m1_expand(k, c).is_zero());
    auto gc = m_k(k, 2, {c, k.parse("g")});
    CHECK(m1_expand(k, gc).is_zero());
    auto im = det.apply(gc);
    CHECK(equal_in(e, im, e.parse("rho")));
    auto h = hom_complex(e, 0, 0, TruncationConfig{4, 4});
    HomClasses cl(h, h, -1);
    CHECK_FALSE(cl.is_trivial(im));
  }
  CHECK_FALSE(is_quasi_equivalence(catalog_functor("Psi_ainf", kQ), {4, 4}).value);
}

TEST_CASE("classification table") {
  for (const auto& e : kTable) {
    CAPTURE(e.name);
    auto c = classify(catalog_functor(e.name, kQ));
    CHECK(c.fibration.value == e.fib);
    CHECK(c.trivial_fibration.value == e.triv);
    CHECK(c.weak_equivalence.value == e.weq);
  }
}

TEST_CASE("parallel classification matches the serial reference") {
  std::vector<StrictFunctor> fs;
  for (const auto& e : kTable) fs.push_back(catalog_functor(e.name, kF2));
  auto par = classify_all(fs, {5, 4}, true);
  auto ser = classify_all(fs, {5, 4}, false);
  REQUIRE(par.size() == ser.size());
  for (size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].fibration.value == ser[i].fibration.value);
    CHECK(par[i].trivial_fibration.value == ser[i].trivial_fibration.value);
    CHECK(par[i].weak_equivalence.value == ser[i].weak_equivalence.value);
  }
}

TEST_CASE("every category maps to the terminal one by a fibration") {
  for (const auto& b : builtin_names()) {
    std::string name = b == "C(n)" ? "C(1)" : b == "P(n)" ? "P(0)" : b;
    CAPTURE(name);
    auto c = classify(terminal_functor(builtin(name, kQ)));
    CHECK(c.fibration.value);
  }
}

TEST_CASE("generating maps") {
  for (const auto& s : {"Q", "S(0)", "S(-3)", "R(2)", "F_dg", "F_prime", "J_disk(1)"})
    CHECK(GeneratingMap::parse(s).name() == s);
  CHECK_THROWS_AS(GeneratingMap::parse("T(1)"), ParseError);
  CHECK_THROWS_AS(generating_functor(GeneratingMap::parse("J_disk(0)"), kQ), AlgebraError);
  auto s1 = generating_functor(GeneratingMap::parse("S(1)"), kQ);
  CHECK(s1.source.name == "C(1)");
  CHECK(s1.target.name == "P(1)");
}

TEST_CASE("lifting characterisations") {
  using G = GeneratingMap;
  CHECK(has_rlp(catalog_functor("Psi", kQ), G::parse("R(0)")).value);
  CHECK_FALSE(has_rlp(catalog_functor("iota", kQ), G::parse("F_dg")).value);
  CHECK(has_rlp(catalog_functor("to_A:B", kQ), G::parse("Q")).value);
  CHECK_FALSE(has_rlp(catalog_functor("to_A:empty", kQ), G::parse("Q")).value);
  CHECK(has_rlp(catalog_functor("Psi", kQ), G::parse("J_disk(0)")).value);
  // S(-1) sees the class of r1 g - g r2 that I2_dg cannot bound
  CHECK_FALSE(has_rlp(catalog_functor("Psi2", kQ), G::parse("S(-1)")).value);
  CHECK(has_rlp(catalog_functor("Psi", kQ), G::parse("S(-1)")).value);
  // surjective but S(0) fails without r's
  CHECK_FALSE(has_rlp(catalog_functor("Psi1", kQ), G::parse("S(0)")).value);
}

TEST_CASE("Surj and fibrations through lifting properties") {
  for (const auto& e : kTable) {
    auto f = catalog_functor(e.name, kQ);
    if (f.source.kind == Kind::Ainf) continue;
    CAPTURE(e.name);
    auto c = classify(f);
    bool i_inj = has_rlp(f, GeneratingMap::parse("Q")).value;
    bool j_inj = has_rlp(f, GeneratingMap::parse("F_prime")).value;
    for (int n : probe_degrees()) {
      i_inj = i_inj && has_rlp(f, GeneratingMap{GeneratingMap::Tag::S, n}).value;
      j_inj = j_inj && has_rlp(f, GeneratingMap{GeneratingMap::Tag::R, n}).value;
    }
    CHECK(c.trivial_fibration.value == i_inj);
    CHECK(c.fibration.value == j_inj);
  }
}

TEST_CASE("weak equivalences satisfy two out of three") {
  std::vector<std::pair<std::string, std::string>> pairs{
      {"Psi", "F_dg"}, {"pi_I", "Psi"}, {"pi_I", "iota"}, {"pi_K", "F_dg"}, {"F_dg", "pi_K"}};
  for (const auto& [gn, fn] : pairs) {
    CAPTURE(gn + " o " + fn);
    auto f = catalog_functor(fn, kQ), g = catalog_functor(gn, kQ);
    auto gf = compose(g, f);
    bool a = is_quasi_equivalence(f).value, b = is_quasi_equivalence(g).value, c = is_quasi_equivalence(gf).value;
    CHECK((a + b + c) != 2);
  }
}

TEST_CASE("brute-force lifts") {
  SUBCASE("R(0) against Psi") {
    auto psi = catalog_functor("Psi", kF2);
    long squares = 0;
    enumerate_squares(GeneratingMap::parse("R(0)"), psi, {3, 4}, 1000, [&](const LiftingSquare& sq) {
      ++squares;
      CHECK(check_square(sq).status == Status::Pass);
      auto l = brute_force_lift(sq, 10000);
      CHECK(l.outcome == LiftResult::Outcome::Found);
      return true;
    });
    CHECK(squares > 0);
  }
  SUBCASE("Q against a functor out of the empty category") {
    auto q = catalog_functor("Q", kF2);  // empty -> A
    auto a = builtin("A", kF2);
    StrictFunctor top = identity_functor(builtin("empty", kF2));
    auto sq = make_square(GeneratingMap::parse("Q"), top, identity_functor(a), q);
    CHECK(check_square(sq).status == Status::Pass);
    auto l = brute_force_lift(sq, 1000);
    CHECK(l.outcome == LiftResult::Outcome::NoneFound);
  }
  SUBCASE("F_dg against iota finds nothing") {
    auto o = oracle_rlp(catalog_functor("iota", kF2), GeneratingMap::parse("F_dg"), 10000);
    CHECK(o.outcome == LiftResult::Outcome::NoneFound);
    REQUIRE(o.counterexample);
    CHECK(check_square(*o.counterexample).status == Status::Pass);
  }
  SUBCASE("budget exhaustion is reported") {
    auto o = oracle_rlp(catalog_functor("Psi", kF2), GeneratingMap::parse("F_dg"), 1);
    CHECK(o.outcome == LiftResult::Outcome::BudgetExhausted);
  }
}

TEST_CASE("Psi2 lifts against F_dg as computed by hand") {
  // f' = f, g' = g, r1' = r1, r2' = r2 + f r1 g - r2 f g, r12' = r2 f r1 - f r1 r1
  for (const auto& ring : {kQ, kF2}) {
    auto psi2 = catalog_functor("Psi2", ring);
    const auto& c = psi2.source;
    StrictFunctor lift;
    lift.name = "hand";
    lift.source = builtin("K", ring);
    lift.target = c;
    lift.object_map = {0, 1};
    lift = with_image(lift, "f", "f");
    lift = with_image(lift, "g", "g");
    lift = with_image(lift, "r1", "r1");
    lift = with_image(lift, "r2", "r2 + f*r1*g - r2*f*g");
    lift = with_image(lift, "r12", "r2*f*r1 - f*r1*r1");
    CHECK(check_functor(lift).status == Status::Pass);
    auto down = compose(psi2, lift);
    auto psi = catalog_functor("Psi", ring);
    for (const auto& [g, e] : psi.generator_map) CHECK(equal_in(psi.target, down.image_of_generator(g), e));
  }
  auto psi2 = catalog_functor("Psi2", kF2);
  StrictFunctor top;
  top.name = "top";
  top.source = builtin("A", kF2);
  top.target = psi2.source;
  top.object_map = {0};
  auto sq = make_square(GeneratingMap::parse("F_dg"), top, catalog_functor("Psi", kF2), psi2);
  REQUIRE(check_square(sq).status == Status::Pass);
  auto l = brute_force_lift(sq, 10000);
  REQUIRE(l.outcome == LiftResult::Outcome::Found);
  CHECK(check_functor(*l.lift).status == Status::Pass);
}

TEST_CASE("oracle agrees with the characterisations over F_2") {
  std::vector<StrictFunctor> fs;
  for (const auto& n : kOracleCatalog) fs.push_back(catalog_functor(n, kF2));
  std::vector<GeneratingMap> maps;
  for (const auto& s : {"Q", "S(0)", "S(1)", "R(0)", "R(1)", "F_dg", "F_prime"}) maps.push_back(GeneratingMap::parse(s));
  auto par = oracle_sweep(fs, maps, 20000, {6, 4}, {3, 4}, true);
  auto ser = oracle_sweep(fs, maps, 20000, {6, 4}, {3, 4}, false);
  REQUIRE(par.size() == fs.size() * maps.size());
  int lifts = 0, fails = 0;
  for (size_t i = 0; i < par.size(); ++i) {
    CAPTURE(par[i].functor + " / " + par[i].map);
    CHECK(par[i].agree());
    CHECK(par[i].oracle.outcome == ser[i].oracle.outcome);
    CHECK(par[i].characterization == ser[i].characterization);
    (par[i].characterization ? lifts : fails)++;
  }
  CHECK(lifts > 0);
  CHECK(fails > 0);
}

TEST_CASE("functor files round trip") {
  for (const auto& n : {"Psi", "Psi2", "iota", "F_prime", "S(1)"}) {
    CAPTURE(n);
    auto f = catalog_functor(n, kQ);
    auto g = parse_functor(functor_to_text(f), kQ);
    CHECK(g.object_map == f.object_map);
    for (size_t i = 0; i < f.source.quiver.generators().size(); ++i)
      CHECK(equal_in(f.target, g.image_of_generator(static_cast<int>(i)), f.image_of_generator(static_cast<int>(i))));
  }
  CHECK_THROWS_AS(parse_functor("functor: x\nsource: builtin:K\ntarget: builtin:I\nobject: 9 -> 1\n", kQ), ParseError);
  CHECK_THROWS_AS(parse_functor("functor: x\nsource: builtin:K\n", kQ), ParseError);
}

TEST_CASE("identities lift against every generating map") {
  for (const auto* name : {"K", "I", "I2_dg", "P(0)", "C(1)"}) {
    auto id = identity_functor(builtin(name, kQ));
    for (int n : probe_degrees()) {
      CHECK(has_rlp(id, GeneratingMap{GeneratingMap::Tag::S, n}).value);
      CHECK(has_rlp(id, GeneratingMap{GeneratingMap::Tag::R, n}).value);
    }
    CHECK(has_rlp(id, GeneratingMap{GeneratingMap::Tag::Q, 0}).value);
  }
}
