#include <doctest.h>

#include <functional>

#include "ainf/presentation.hpp"

using namespace ainf;

namespace {

const RingSpec kQ = RingSpec::rationals();

GradedQuiver k_quiver() {
  GradedQuiver q;
  q.add_object("1");
  q.add_object("2");
  q.add_generator("f", "1", "2", 0);
  q.add_generator("g", "2", "1", 0);
  q.add_generator("r1", "1", "1", -1);
  q.add_generator("r2", "2", "2", -1);
  q.add_generator("r12", "1", "2", -2);
  return q;
}

// Random tree code over a single object with unit leaves mixed in.
Monomial random_tree(std::mt19937& rng, int leaves_left) {
  std::function<void(int, Monomial&)> build = [&](int n, Monomial& out) {
    if (n == 1) {
      bool unit = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
      out.push_back(unit ? unit_code(0) : 0);
      return;
    }
    int k = std::uniform_int_distribution<int>(2, std::min(n, 4))(rng);
    // Split n leaves into k nonempty parts.
    std::vector<int> parts(k, 1);
    for (int i = 0; i < n - k; ++i) parts[std::uniform_int_distribution<int>(0, k - 1)(rng)]++;
    out.push_back(-k);
    for (int p : parts) build(p, out);
  };
  Monomial m;
  build(leaves_left, m);
  return m;
}

}  // namespace

TEST_CASE("word composition") {
  auto q = k_quiver();
  auto f = generator_element(q, Kind::DG, kQ, "f");
  auto g = generator_element(q, Kind::DG, kQ, "g");
  auto gf = compose_word(q, g, f);
  CHECK(gf.source == 0);
  CHECK(gf.target == 0);
  CHECK(element_to_string(q, gf) == "g*f");
  CHECK(compose_word(q, unit_element(Kind::DG, kQ, 1), f) == f);
  CHECK(compose_word(q, f, unit_element(Kind::DG, kQ, 0)) == f);
  CHECK(compose_word(q, compose_word(q, f, g), f) == compose_word(q, f, compose_word(q, g, f)));
  CHECK_THROWS_AS(compose_word(q, f, f), AlgebraError);
  auto r = compose_word(q, generator_element(q, Kind::DG, kQ, "r2"), f);
  CHECK(r.degree == -1);
}

TEST_CASE("grafting and unit laws") {
  auto q = k_quiver();
  auto f = generator_element(q, Kind::Ainf, kQ, "f");
  auto g = generator_element(q, Kind::Ainf, kQ, "g");
  auto u1 = unit_element(Kind::Ainf, kQ, 0);
  auto u2 = unit_element(Kind::Ainf, kQ, 1);
  CHECK(graft(q, 2, {u2, f}) == f);
  CHECK(graft(q, 2, {f, u1}) == f);
  CHECK(graft(q, 3, {f, u1, g}).is_zero());
  auto left = graft(q, 2, {graft(q, 2, {f, g}), f});
  auto right = graft(q, 2, {f, graft(q, 2, {g, f})});
  CHECK(left != right);
  CHECK(element_to_string(q, left) == "m2(m2(f,g),f)");
  CHECK(graft(q, 3, {f, g, f}).degree == -1);
  CHECK(graft(q, 2, {g, f}).degree == 0);
  CHECK_THROWS_AS(graft(q, 2, {f, f}), AlgebraError);
  CHECK_THROWS_AS(graft(q, 5, {f, g, f, g, f}, 4), AlgebraError);
}

TEST_CASE("degrees add under composition and grafting") {
  auto q = k_quiver();
  std::mt19937 rng(1);
  std::vector<std::string> names{"f", "g", "r1", "r2", "r12"};
  for (int t = 0; t < 200; ++t) {
    auto a = generator_element(q, Kind::Ainf, kQ, names[rng() % 5]);
    auto b = generator_element(q, Kind::Ainf, kQ, names[rng() % 5]);
    auto c = generator_element(q, Kind::Ainf, kQ, names[rng() % 5]);
    if (a.source == b.target) {
      auto e = graft(q, 2, {a, b});
      CHECK(e.degree == a.degree + b.degree);
      if (b.source == c.target) CHECK(graft(q, 3, {a, b, c}).degree == a.degree + b.degree + c.degree - 1);
      auto da = generator_element(q, Kind::DG, kQ, q.generator(a.terms.begin()->first[0]).name);
      auto db = generator_element(q, Kind::DG, kQ, q.generator(b.terms.begin()->first[0]).name);
      CHECK(compose_word(q, da, db).degree == da.degree + db.degree);
    }
  }
}

TEST_CASE("graft is multilinear") {
  auto q = k_quiver();
  auto p = [&](const std::string& s) { return parse_element(q, Kind::Ainf, kQ, s); };
  auto lhs = graft(q, 3, {p("f"), p("g + 2*m2(g,m2(f,g))"), p("f")});
  auto rhs = add(graft(q, 3, {p("f"), p("g"), p("f")}), scale(graft(q, 3, {p("f"), p("m2(g,m2(f,g))"), p("f")}), 2));
  CHECK(lhs == rhs);
  CHECK(lhs == p("m3(f,g,f) + 2*m3(f,m2(g,m2(f,g)),f)"));
}

TEST_CASE("truncation") {
  auto q = k_quiver();
  auto w = parse_element(q, Kind::DG, kQ, "g*f*g*f*g*f*r1");
  TruncationConfig cfg{6, 4};
  auto t = truncate(w, cfg);
  CHECK(t.is_zero());
  CHECK(t.truncated);
  auto short_word = parse_element(q, Kind::DG, kQ, "g*f - id@1");
  CHECK(truncate(short_word, cfg) == short_word);
  CHECK_FALSE(truncate(short_word, cfg).truncated);
  CHECK(truncate(truncate(add(w, scale(w, 0)), cfg), cfg) == truncate(w, cfg));
}

TEST_CASE("unit normal form is confluent") {
  std::mt19937 rng(99);
  int zero = 0, nonzero = 0;
  for (int t = 0; t < 1000; ++t) {
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    Monomial tree = random_tree(rng, n);
    Monomial a, b;
    bool ka = normalize_units(tree, a);
    for (int rep = 0; rep < 3; ++rep) {
      bool kb = normalize_units_random(tree, b, rng);
      CHECK(ka == kb);
      if (ka && kb) CHECK(a == b);
    }
    (ka ? nonzero : zero)++;
  }
  CHECK(zero > 50);
  CHECK(nonzero > 50);
}

TEST_CASE("element syntax round trips") {
  auto q = k_quiver();
  for (std::string s : {"g*f", "-g*f", "2*g*f - id@1", "r1*g - g*r2", "-1/2*f*r1"}) {
    auto e = parse_element(q, Kind::DG, kQ, s);
    CHECK(parse_element(q, Kind::DG, kQ, element_to_string(q, e)) == e);
  }
  CHECK(parse_element(q, Kind::DG, kQ, "-1/2 f*r1") == parse_element(q, Kind::DG, kQ, "-1/2*f*r1"));
  CHECK(parse_element(q, Kind::DG, kQ, "(g + g)*f") == parse_element(q, Kind::DG, kQ, "2 g*f"));
  CHECK(parse_element(q, Kind::DG, kQ, "0").is_zero());
  for (std::string s : {"m2(g,f) - id@1", "m3(f,g,f)", "m2(r1,m2(g,f))"}) {
    auto e = parse_element(q, Kind::Ainf, kQ, s);
    CHECK(parse_element(q, Kind::Ainf, kQ, element_to_string(q, e)) == e);
  }
  CHECK_THROWS_AS(parse_element(q, Kind::DG, kQ, "g*g"), ParseError);
  CHECK_THROWS_AS(parse_element(q, Kind::DG, kQ, "h"), ParseError);
  CHECK_THROWS_AS(parse_element(q, Kind::Ainf, kQ, "g*f"), ParseError);
  CHECK_THROWS_AS(parse_element(q, Kind::DG, kQ, "g*f + f"), ParseError);
  CHECK_THROWS_AS(parse_element(q, Kind::DG, RingSpec::integers(), "1/2 g*f"), ParseError);
  CHECK(parse_element(q, Kind::DG, RingSpec::prime_field(3), "1/2 g*f") ==
        parse_element(q, Kind::DG, RingSpec::prime_field(3), "2 g*f"));
}

TEST_CASE("shadow words") {
  auto q = k_quiver();
  auto e = parse_element(q, Kind::Ainf, kQ, "m2(m2(f,g),f)");
  Monomial w;
  REQUIRE(shadow_word(e.terms.begin()->first, w));
  CHECK(monomial_to_string(q, Kind::DG, w) == "f*g*f");
  auto t = parse_element(q, Kind::Ainf, kQ, "m3(f,g,f)");
  CHECK_FALSE(shadow_word(t.terms.begin()->first, w));
}
