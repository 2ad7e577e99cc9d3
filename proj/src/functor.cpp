#include "ainf/functor.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace ainf {

// ---------------------------------------------------------------------------
// application

Element StrictFunctor::image_of_generator(int gen) const {
  const auto& g = source.quiver.generator(gen);
  auto it = generator_map.find(gen);
  if (it == generator_map.end() || !it->second.typed())
    return typed_zero(target.kind, ring(), object_map.at(g.source), object_map.at(g.target), g.degree);
  return it->second;
}

namespace {

Element typed_or_zero(const StrictFunctor& f, int src, int tgt, int degree) {
  return typed_zero(f.target.kind, f.ring(), src, tgt, degree);
}

Element apply_tree(const StrictFunctor& f, const Monomial& m, size_t& pos) {
  int c = m[pos++];
  if (is_unit_code(c)) return unit_element(f.target.kind, f.ring(), f.object_map.at(unit_object(c)));
  if (c >= 0) return f.image_of_generator(c);
  int k = -c;
  std::vector<Element> ch;
  bool zero = false;
  for (int i = 0; i < k; ++i) {
    ch.push_back(apply_tree(f, m, pos));
    zero = zero || ch.back().is_zero();
  }
  if (zero) {
    int degree = 2 - k;
    for (const auto& e : ch) degree += e.degree;
    return typed_or_zero(f, ch.back().source, ch.front().target, degree);
  }
  return m_k(f.target, k, ch);
}

Element apply_monomial(const StrictFunctor& f, const Monomial& m) {
  if (is_unit(m)) return unit_element(f.target.kind, f.ring(), f.object_map.at(unit_object(m[0])));
  if (f.source.kind == Kind::Ainf) {
    size_t pos = 0;
    return apply_tree(f, m, pos);
  }
  if (f.target.kind == Kind::Ainf && m.size() > 1)
    throw AlgebraError("a DG word has no image in an A-infinity target");
  Element out = f.image_of_generator(m[0]);
  for (size_t i = 1; i < m.size(); ++i) {
    Element next = f.image_of_generator(m[i]);
    if (out.is_zero() || next.is_zero()) {
      out = typed_or_zero(f, next.source, out.target, out.degree + next.degree);
      continue;
    }
    out = m_k(f.target, 2, {out, next});
  }
  return out;
}

}  // namespace

Element StrictFunctor::apply(const Element& e) const {
  if (!e.typed()) return zero_element(target.kind, ring());
  Element out = typed_zero(target.kind, ring(), object_map.at(e.source), object_map.at(e.target), e.degree);
  for (const auto& [m, c] : e.terms) {
    Element im = apply_monomial(*this, m);
    if (!im.is_zero()) out = add(out, scale(im, c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// constructions

StrictFunctor identity_functor(const CategoryPresentation& c) {
  StrictFunctor f;
  f.name = "id:" + c.name;
  f.source = c;
  f.target = c;
  for (size_t i = 0; i < c.quiver.objects().size(); ++i) f.object_map.push_back(static_cast<int>(i));
  for (size_t g = 0; g < c.quiver.generators().size(); ++g)
    f.generator_map[static_cast<int>(g)] = monomial_element(c.quiver, c.kind, c.ring, Monomial{static_cast<int>(g)});
  return f;
}

StrictFunctor compose(const StrictFunctor& g, const StrictFunctor& f) {
  if (presentation_to_text(f.target) != presentation_to_text(g.source))
    throw AlgebraError("cannot compose " + g.name + " after " + f.name);
  StrictFunctor h;
  h.name = g.name + "*" + f.name;
  h.source = f.source;
  h.target = g.target;
  for (int o : f.object_map) h.object_map.push_back(g.object_map.at(o));
  for (size_t i = 0; i < f.source.quiver.generators().size(); ++i) {
    int gen = static_cast<int>(i);
    h.generator_map[gen] = g.apply(f.image_of_generator(gen));
  }
  return h;
}

StrictFunctor collapse_functor(const CategoryPresentation& c, const CategoryPresentation& a) {
  if (a.quiver.objects().size() != 1) throw AlgebraError("collapse target must have one object");
  StrictFunctor f;
  f.name = "to_" + a.name + ":" + c.name;
  f.source = c;
  f.target = a;
  f.object_map.assign(c.quiver.objects().size(), 0);
  const auto& gens = c.quiver.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    int gen = static_cast<int>(i);
    bool boundary = false;
    for (const auto& [h, d] : c.diff)
      if (d.terms.size() == 1 && d.terms.begin()->first == Monomial{gen}) boundary = true;
    if (gens[i].degree == 0 && !boundary) f.generator_map[gen] = unit_element(a.kind, a.ring, 0);
  }
  return f;
}

StrictFunctor terminal_functor(const CategoryPresentation& c) {
  StrictFunctor f;
  f.name = "to_terminal:" + c.name;
  f.source = c;
  f.target = builtin("terminal", c.ring);
  f.object_map.assign(c.quiver.objects().size(), 0);
  return f;
}

namespace {

StrictFunctor by_labels(const std::string& name, const CategoryPresentation& s, const CategoryPresentation& t,
                        const std::vector<std::pair<std::string, std::string>>& objects,
                        const std::vector<std::pair<std::string, std::string>>& gens) {
  StrictFunctor f;
  f.name = name;
  f.source = s;
  f.target = t;
  f.object_map.assign(s.quiver.objects().size(), -1);
  for (const auto& [a, b] : objects) f.object_map[s.object(a)] = t.object(b);
  for (const auto& [g, text] : gens) {
    int id = s.quiver.generator_index(g);
    if (id < 0) throw AlgebraError("unknown generator " + g);
    f.generator_map[id] = t.parse(text);
  }
  return f;
}

}  // namespace

StrictFunctor catalog_functor(const std::string& name, const RingSpec& ring) {
  static const std::regex family("(S|R)\\((-?[0-9]+)\\)");
  static const std::regex prefixed("(id|to_A|to_terminal):(.+)");
  std::smatch m;
  auto I = [&] { return builtin("I", ring); };
  const std::vector<std::pair<std::string, std::string>> same{{"1", "1"}, {"2", "2"}};
  const std::vector<std::pair<std::string, std::string>> js{{"f", "j01"}, {"g", "j10"}};
  if (name == "Psi") return by_labels(name, builtin("K", ring), I(), same, js);
  if (name == "Psi0") return by_labels(name, builtin("I0", ring), I(), same, {});
  if (name == "Psi1") return by_labels(name, builtin("I1", ring), I(), same, js);
  if (name == "Psi2") return by_labels(name, builtin("I2_dg", ring), I(), same, js);
  if (name == "Psi_ainf") return by_labels(name, builtin("K_ainf", ring), I(), same, js);
  if (name == "iota") return by_labels(name, builtin("B", ring), I(), {{"4", "1"}, {"5", "2"}}, {});
  if (name == "pi_I" || name == "pi_B" || name == "pi_K") {
    auto f = collapse_functor(builtin(name.substr(3), ring), builtin("A", ring));
    f.name = name;
    return f;
  }
  if (name == "F_dg") return by_labels(name, builtin("A", ring), builtin("K", ring), {{"3", "1"}}, {});
  if (name == "F_prime") return by_labels(name, builtin("A", ring), builtin("K_ainf", ring), {{"3", "1"}}, {});
  if (name == "Q") return by_labels(name, builtin("empty", ring), builtin("A", ring), {}, {});
  if (std::regex_match(name, m, family)) {
    std::string n = m[2];
    if (m[1] == "S")
      return by_labels(name, builtin("C(" + n + ")", ring), builtin("P(" + n + ")", ring), {{"8", "6"}, {"9", "7"}},
                       {{"s", "de"}});
    return by_labels(name, builtin("B", ring), builtin("P(" + n + ")", ring), {{"4", "6"}, {"5", "7"}}, {});
  }
  if (std::regex_match(name, m, prefixed)) {
    auto c = builtin(m[2], ring);
    if (m[1] == "id") return identity_functor(c);
    if (m[1] == "to_A") return collapse_functor(c, builtin("A", ring));
    return terminal_functor(c);
  }
  throw AlgebraError("unknown catalog functor: " + name);
}

std::vector<std::string> catalog_functor_names() {
  return {"Psi",    "Psi0", "Psi1", "Psi2", "Psi_ainf", "iota", "pi_I",         "pi_B",
          "pi_K",   "F_dg", "F_prime", "Q", "S(n)",     "R(n)", "id:<builtin>", "to_A:<builtin>",
          "to_terminal:<builtin>"};
}

// ---------------------------------------------------------------------------
// file format

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

CategoryPresentation load_category(const std::string& spec, const RingSpec& ring, const std::string& base_dir) {
  if (spec.rfind("builtin:", 0) == 0) return builtin(spec.substr(8), ring);
  std::filesystem::path p(spec);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p);
  if (!in) throw ParseError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str(), ring);
}

bool is_builtin_copy(const CategoryPresentation& c) {
  try {
    return presentation_to_text(builtin(c.name, c.ring)) == presentation_to_text(c);
  } catch (const AlgebraError&) {
    return false;
  }
}

}  // namespace

StrictFunctor parse_functor(const std::string& text, const RingSpec& ring, const std::string& base_dir) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string name = "functor", src, tgt;
  std::vector<std::pair<std::string, std::string>> objects, gens;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  auto arrow = [&](const std::string& body) {
    auto p = body.find("->");
    if (p == std::string::npos) fail("expected 'a -> b'");
    return std::make_pair(trim(body.substr(0, p)), trim(body.substr(p + 2)));
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    std::string key = trim(line.substr(0, colon)), value = trim(line.substr(colon + 1));
    if (key == "functor")
      name = value.empty() ? name : value;
    else if (key == "source")
      src = value;
    else if (key == "target")
      tgt = value;
    else if (key == "object")
      objects.push_back(arrow(value));
    else if (key == "gen")
      gens.push_back(arrow(value));
    else
      fail("unknown key " + key);
  }
  if (src.empty() || tgt.empty()) throw ParseError("functor needs source: and target:");
  auto s = load_category(src, ring, base_dir);
  auto t = load_category(tgt, ring, base_dir);
  StrictFunctor f;
  try {
    f = by_labels(name, s, t, objects, gens);
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  }
  for (size_t i = 0; i < f.object_map.size(); ++i)
    if (f.object_map[i] < 0) throw ParseError("object " + s.quiver.objects()[i] + " is not mapped");
  return f;
}

std::string functor_to_text(const StrictFunctor& f) {
  std::ostringstream out;
  out << "functor: " << f.name << "\n";
  auto where = [](const CategoryPresentation& c) {
    return is_builtin_copy(c) ? "builtin:" + c.name : c.name + ".txt";
  };
  out << "source: " << where(f.source) << "\n";
  out << "target: " << where(f.target) << "\n";
  for (size_t i = 0; i < f.object_map.size(); ++i)
    out << "object: " << f.source.quiver.objects()[i] << " -> " << f.target.quiver.objects()[f.object_map[i]]
        << "\n";
  for (const auto& [g, e] : f.generator_map)
    if (!e.is_zero()) out << "gen: " << f.source.quiver.generator(g).name << " -> " << f.target.show(e) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// axioms

bool equal_in(const CategoryPresentation& c, const Element& a, const Element& b, const TruncationConfig& cfg) {
  Element d = a.typed() ? (b.typed() ? sub(a, b) : a) : (b.typed() ? scale(b, -1) : a);
  if (d.is_zero()) return true;
  auto r = reduce_relations(c, d, cfg);
  return r && r->is_zero();
}

CheckReport check_functor(const StrictFunctor& f, const TruncationConfig& cfg) {
  CheckReport rep;
  rep.id = "functor:" + f.name;
  rep.ring = f.ring().name();
  rep.max_word_length = cfg.max_word_length;
  rep.max_arity = cfg.max_arity;
  auto& wit = rep.witnesses;
  const auto& sq = f.source.quiver;
  const auto& tq = f.target.quiver;
  int nt = static_cast<int>(tq.objects().size());
  bool objects_ok = f.object_map.size() == sq.objects().size();
  for (int o : f.object_map) objects_ok = objects_ok && o >= 0 && o < nt;
  if (!objects_ok || f.source.ring != f.target.ring) {
    wit.push_back(objects_ok ? "source and target rings differ" : "object map is incomplete");
    rep.status = Status::Fail;
    return rep;
  }
  std::vector<bool> typed_ok(sq.generators().size(), true);
  for (const auto& [g, e] : f.generator_map) {
    const auto& gen = sq.generator(g);
    if (!e.typed()) continue;
    if (e.source != f.object_map[gen.source] || e.target != f.object_map[gen.target] || e.degree != gen.degree) {
      typed_ok[g] = false;
      wit.push_back("image of " + gen.name + " = " + f.target.show(e) + " has the wrong endpoints or degree");
    }
  }
  auto eval = [&](const std::function<void()>& body, const std::string& what) {
    try {
      body();
    } catch (const AlgebraError& e) {
      wit.push_back(what + ": " + e.what());
    }
  };
  for (size_t i = 0; i < sq.generators().size(); ++i) {
    int g = static_cast<int>(i);
    const std::string& gname = sq.generator(g).name;
    eval(
        [&] {
          Element lhs = m1_expand(f.target, f.image_of_generator(g));
          Element rhs = f.apply(f.source.d_of(g));
          if (!equal_in(f.target, lhs, rhs, cfg))
            wit.push_back("d(F(" + gname + ")) = " + f.target.show(lhs) + " but F(d(" + gname +
                          ")) = " + f.target.show(rhs));
        },
        "d-compatibility on " + gname);
  }
  for (const auto& r : f.source.relations)
    eval(
        [&] {
          Element im = f.apply(r);
          if (!equal_in(f.target, im, zero_element(f.target.kind, f.ring()), cfg))
            wit.push_back("relation " + f.source.show(r) + " maps to " + f.target.show(im));
        },
        "relation " + f.source.show(r));
  rep.status = wit.empty() ? Status::Pass : Status::Fail;
  return rep;
}

// ---------------------------------------------------------------------------
// windows

int stretch(const StrictFunctor& f) {
  auto ws = generator_weights(f.source);
  auto wt = generator_weights(f.target);
  int s = 1;
  for (const auto& [g, e] : f.generator_map) {
    int top = 0;
    for (const auto& [m, c] : e.terms) top = std::max(top, monomial_weight(wt, m));
    s = std::max(s, (top + ws[g] - 1) / ws[g]);
  }
  return s;
}

TruncationConfig image_config(const StrictFunctor& f, const TruncationConfig& cfg) {
  TruncationConfig t = cfg;
  t.max_word_length = cfg.max_word_length * stretch(f);
  for (const auto& [g, e] : f.generator_map)
    for (const auto& [m, c] : e.terms) t.max_arity = std::max(t.max_arity, max_node_arity(m));
  return t;
}

Matrix hom_map_matrix(const StrictFunctor& f, const HomTruncation& src, const HomTruncation& tgt, int k,
                      int* escaped) {
  const auto& sb = src.basis(k);
  const auto& tb = tgt.basis(k);
  Matrix mat(f.ring(), static_cast<int>(tb.size()), static_cast<int>(sb.size()));
  for (size_t j = 0; j < sb.size(); ++j) {
    Element e = typed_zero(f.source.kind, f.ring(), src.source, src.target, k);
    add_term(e, sb[j], Scalar(1));
    auto c = tgt.coordinates(f.apply(e));
    if (!c) {
      if (escaped) ++*escaped;
      continue;
    }
    for (size_t i = 0; i < c->size(); ++i)
      if ((*c)[i] != 0) mat.set(static_cast<int>(i), static_cast<int>(j), (*c)[i]);
  }
  return mat;
}

// ---------------------------------------------------------------------------
// predicates

Verdict is_surjective_on_objects(const StrictFunctor& f) {
  Verdict v;
  std::vector<bool> hit(f.target.quiver.objects().size(), false);
  for (int o : f.object_map) hit[o] = true;
  v.value = true;
  for (size_t i = 0; i < hit.size(); ++i)
    if (!hit[i]) {
      v.value = false;
      v.witnesses.push_back("object " + f.target.quiver.objects()[i] + " is not in the image");
    }
  return v;
}

namespace {

// Column span of `m` contains every column of `cols`.
bool spans(const Matrix& m, const Matrix& cols) {
  if (cols.cols() == 0) return true;
  if (m.ring().is_field()) return rank(Matrix::hstack(m, cols)) == rank(m);
  auto t = cols.transpose();
  for (int j = 0; j < cols.cols(); ++j) {
    Vector b(cols.rows(), Scalar(0));
    for (const auto& e : t.row(j)) b[e.col] = e.value;
    if (!solve(m, b)) return false;
  }
  return true;
}

// Largest target weight among the images of a source window.
int image_weight(const StrictFunctor& f, const HomTruncation& src) {
  auto wt = generator_weights(f.target);
  int top = 0;
  for (const auto& [k, d] : src.data)
    for (const auto& b : src.basis(k)) {
      Element e = typed_zero(f.source.kind, f.ring(), src.source, src.target, k);
      add_term(e, b, Scalar(1));
      for (const auto& [m, c] : f.apply(e).terms) top = std::max(top, monomial_weight(wt, m));
    }
  return top;
}

std::string pair_name(const StrictFunctor& f, int x, int y) {
  return f.source.quiver.objects()[x] + "->" + f.source.quiver.objects()[y];
}

}  // namespace

Verdict is_surjective_on_morphisms(const StrictFunctor& f, const TruncationConfig& cfg, std::optional<int> degree) {
  Verdict v;
  v.value = true;
  int n = static_cast<int>(f.source.quiver.objects().size());
  TruncationConfig sbig = enlarged(f.source, cfg);
  for (int x = 0; x < n && v.value; ++x)
    for (int y = 0; y < n && v.value; ++y) {
      int fx = f.object_map[x], fy = f.object_map[y];
      auto sb = hom_complex(f.source, x, y, sbig);
      auto ts = hom_complex(f.target, fx, fy, cfg);
      TruncationConfig tcfg = image_config(f, sbig);
      tcfg.max_word_length = std::max(cfg.max_word_length, std::min(tcfg.max_word_length, image_weight(f, *sb)));
      auto ti = hom_complex(f.target, fx, fy, tcfg);
      v.exact = v.exact && ts->exact_flag && sb->exact_flag;
      std::vector<int> degrees;
      if (degree)
        degrees.push_back(*degree);
      else
        for (const auto& [k, d] : ts->data)
          if (!ts->basis(k).empty()) degrees.push_back(k);
      for (int k : degrees) {
        const auto& want = ts->basis(k);
        if (want.empty()) continue;
        int escaped = 0;
        Matrix m = hom_map_matrix(f, *sb, *ti, k, &escaped);
        if (escaped) v.exact = false;
        std::vector<Vector> cols;
        for (const auto& b : want) {
          Element e = typed_zero(f.target.kind, f.ring(), fx, fy, k);
          add_term(e, b, Scalar(1));
          cols.push_back(*ti->coordinates(e));
        }
        if (!spans(m, columns_matrix(f.ring(), m.rows(), cols))) {
          v.value = false;
          v.witnesses.push_back("F : " + pair_name(f, x, y) + " is not onto in degree " + std::to_string(k));
          break;
        }
      }
    }
  return v;
}

namespace {

// All vectors of F_p^r, or nullopt when there are more than `limit`.
std::optional<std::vector<Vector>> all_vectors(const RingSpec& ring, int r, long limit) {
  if (ring.kind() != RingSpec::Kind::PrimeField) return std::nullopt;
  long p = ring.characteristic(), count = 1;
  for (int i = 0; i < r; ++i) {
    count *= p;
    if (count > limit) return std::nullopt;
  }
  std::vector<Vector> out;
  for (long c = 0; c < count; ++c) {
    Vector v(r);
    long t = c;
    for (int i = 0; i < r; ++i) {
      v[i] = Scalar(t % p);
      t /= p;
    }
    out.push_back(v);
  }
  return out;
}

bool invertible(const H0Category& h, int x, int y, const Vector& c, bool* window_ok) {
  try {
    return h.inverse(x, y, h.element_of(x, y, c)).has_value();
  } catch (const WindowError&) {
    if (window_ok) *window_ok = false;
    return false;
  }
}

Vector add_vec(const RingSpec& ring, const Vector& a, const Vector& b, const Scalar& s) {
  Vector out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = ring.add(a[i], ring.mul(s, b[i]));
  return out;
}

}  // namespace

InvertibleClasses invertible_classes(const H0Category& h, int x, int y) {
  InvertibleClasses out;
  const RingSpec& ring = h.category().ring;
  int r = h.hom(x, y).free_rank();
  bool ok = true;
  if (auto all = all_vectors(ring, r, 4096)) {
    for (const auto& v : *all)
      if (invertible(h, x, y, v, &ok)) out.classes.push_back(v);
    out.exhaustive = ok;
    return out;
  }
  std::vector<Vector> probes{Vector(r, Scalar(0))};
  for (int i = 0; i < r; ++i) {
    Vector e(r, Scalar(0));
    e[i] = 1;
    probes.push_back(e);
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      probes.push_back(add_vec(ring, probes[i + 1], probes[j + 1], 1));
      probes.push_back(add_vec(ring, probes[i + 1], probes[j + 1], -1));
    }
  for (const auto& v : probes)
    if (invertible(h, x, y, v, &ok)) out.classes.push_back(v);
  out.exhaustive = ok && r <= 1;
  return out;
}

Verdict is_isofibration(const StrictFunctor& f, const TruncationConfig& cfg) {
  Verdict v;
  v.value = true;
  const RingSpec& ring = f.ring();
  TruncationConfig tcfg = image_config(f, cfg);
  H0Category hs = h0(f.source, cfg);
  H0Category ht(f.target, tcfg, enlarged(f.target, tcfg));
  v.exact = hs.exact() && ht.exact();
  int ns = hs.object_count(), nt = ht.object_count();
  const auto& so = f.source.quiver.objects();
  const auto& to = f.target.quiver.objects();
  for (int a = 0; a < ns && v.value; ++a)
    for (int b = 0; b < nt && v.value; ++b) {
      int fa = f.object_map[a];
      auto inv = invertible_classes(ht, fa, b);
      if (!inv.exhaustive) v.exact = false;
      for (const auto& g : inv.classes) {
        bool found = false;
        for (int a2 = 0; a2 < ns && !found; ++a2) {
          if (f.object_map[a2] != b) continue;
          const auto& hc = hs.hom(a, a2);
          const auto& tc = ht.hom(fa, b);
          int rs = hc.free_rank(), rt = tc.free_rank();
          Matrix m(ring, rt, rs);
          bool ok = true;
          for (int i = 0; i < rs; ++i) {
            auto c = tc.class_of(f.apply(hc.representatives()[i]));
            if (!c) {
              ok = false;
              continue;
            }
            for (int j = 0; j < rt; ++j)
              if ((*c)[j] != 0) m.set(j, i, (*c)[j]);
          }
          if (!ok) v.exact = false;
          auto f0 = rt == 0 ? std::optional<Vector>(Vector(rs, Scalar(0))) : solve(m, g);
          if (!f0) continue;
          auto ker = rt == 0 ? std::vector<Vector>{} : kernel_basis(m);
          if (rt == 0)
            for (int i = 0; i < rs; ++i) {
              Vector e(rs, Scalar(0));
              e[i] = 1;
              ker.push_back(e);
            }
          std::vector<Vector> candidates;
          if (auto all = all_vectors(ring, static_cast<int>(ker.size()), 4096)) {
            for (const auto& c : *all) {
              Vector p = *f0;
              for (size_t i = 0; i < ker.size(); ++i) p = add_vec(ring, p, ker[i], c[i]);
              candidates.push_back(p);
            }
          } else {
            candidates.push_back(*f0);
            for (const auto& k : ker) {
              candidates.push_back(add_vec(ring, *f0, k, 1));
              candidates.push_back(add_vec(ring, *f0, k, -1));
            }
            if (!ker.empty()) v.exact = false;
          }
          bool wok = true;
          for (const auto& c : candidates)
            if (invertible(hs, a, a2, c, &wok)) {
              found = true;
              break;
            }
          if (!wok) v.exact = false;
        }
        if (!found) {
          v.value = false;
          std::string gs = f.target.show(ht.element_of(fa, b, g));
          v.witnesses.push_back("the isomorphism [" + gs + "] : " + to[fa] + " -> " + to[b] +
                                " has no invertible lift out of " + so[a]);
          break;
        }
      }
    }
  return v;
}

Verdict is_quasi_equivalence(const StrictFunctor& f, const TruncationConfig& cfg) {
  Verdict v;
  v.value = true;
  const RingSpec& ring = f.ring();
  int n = static_cast<int>(f.source.quiver.objects().size());
  TruncationConfig sbig = enlarged(f.source, cfg);
  TruncationConfig tcfg = image_config(f, cfg);
  TruncationConfig tbig = enlarged(f.target, tcfg);
  for (int x = 0; x < n && v.value; ++x)
    for (int y = 0; y < n && v.value; ++y) {
      int fx = f.object_map[x], fy = f.object_map[y];
      auto ss = hom_complex(f.source, x, y, cfg);
      auto sb = hom_complex(f.source, x, y, sbig);
      auto ts = hom_complex(f.target, fx, fy, tcfg);
      auto tb = hom_complex(f.target, fx, fy, tbig);
      v.exact = v.exact && ss->exact_flag && ts->exact_flag;
      std::set<int> degrees;
      for (const auto& [k, d] : ss->data)
        if (!ss->basis(k).empty() || !ts->basis(k).empty()) degrees.insert(k);
      for (const auto& [k, d] : ts->data)
        if (!ss->basis(k).empty() || !ts->basis(k).empty()) degrees.insert(k);
      for (int k : degrees) {
        HomClasses sc(ss, sb, k), tc(ts, tb, k);
        std::string where = pair_name(f, x, y) + " in degree " + std::to_string(k);
        if (sc.torsion() != tc.torsion() || sc.free_rank() != tc.free_rank()) {
          v.value = false;
          v.witnesses.push_back("H(" + where + "): " + sc.description().to_string(ring) + " vs " +
                                tc.description().to_string(ring));
          break;
        }
        int r = sc.free_rank();
        if (r == 0) continue;
        Matrix m(ring, r, r);
        for (int i = 0; i < r; ++i) {
          auto c = tc.class_of(f.apply(sc.representatives()[i]));
          if (!c) throw WindowError("image of a cycle leaves the target window at " + where);
          for (int j = 0; j < r; ++j)
            if ((*c)[j] != 0) m.set(j, i, (*c)[j]);
        }
        auto snf = smith_normal_form(m);
        bool iso = snf.rank == r;
        for (const auto& d : snf.diagonal) iso = iso && ring.is_unit(d);
        if (!iso) {
          v.value = false;
          v.witnesses.push_back("H(F) is not invertible on " + where);
          break;
        }
      }
    }
  if (!v.value) return v;
  // essential surjectivity on H^0
  H0Category ht(f.target, tcfg, tbig);
  v.exact = v.exact && ht.exact();
  std::vector<bool> hit(ht.object_count(), false);
  for (int o : f.object_map) hit[o] = true;
  for (int y = 0; y < ht.object_count(); ++y) {
    if (hit[y]) continue;
    bool found = false;
    for (int x = 0; x < n && !found; ++x) {
      auto inv = invertible_classes(ht, f.object_map[x], y);
      if (!inv.exhaustive) v.exact = false;
      found = !inv.classes.empty();
    }
    if (!found) {
      v.value = false;
      v.witnesses.push_back("object " + f.target.quiver.objects()[y] + " is not isomorphic to an image object");
    }
  }
  return v;
}

}  // namespace ainf
