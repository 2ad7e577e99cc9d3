#include "ainf/presentation.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <regex>

namespace ainf {

// ---------------------------------------------------------------------------
// GradedQuiver

int GradedQuiver::add_object(const std::string& label) {
  if (label.empty()) throw AlgebraError("empty object label");
  auto it = object_ids_.find(label);
  if (it != object_ids_.end()) return it->second;
  int id = static_cast<int>(objects_.size());
  objects_.push_back(label);
  object_ids_[label] = id;
  return id;
}

int GradedQuiver::add_generator(const std::string& name, const std::string& source,
                                const std::string& target, int degree) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_']*");
  static const std::regex reserved("m[0-9]+|id");
  if (!std::regex_match(name, ident) || std::regex_match(name, reserved))
    throw AlgebraError("invalid generator name: " + name);
  if (gen_ids_.count(name)) throw AlgebraError("duplicate generator: " + name);
  int s = object_index(source), t = object_index(target);
  if (s < 0 || t < 0) throw AlgebraError("generator " + name + " has an unknown endpoint");
  int id = static_cast<int>(gens_.size());
  gens_.push_back({name, s, t, degree});
  gen_ids_[name] = id;
  return id;
}

int GradedQuiver::object_index(const std::string& label) const {
  auto it = object_ids_.find(label);
  return it == object_ids_.end() ? -1 : it->second;
}

int GradedQuiver::generator_index(const std::string& name) const {
  auto it = gen_ids_.find(name);
  return it == gen_ids_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// monomials

namespace {

int leaf_source(const GradedQuiver& q, int c) {
  return is_unit_code(c) ? unit_object(c) : q.generator(c).source;
}
int leaf_target(const GradedQuiver& q, int c) {
  return is_unit_code(c) ? unit_object(c) : q.generator(c).target;
}
bool is_node(int c) { return c < 0 && !is_unit_code(c); }

// Position just past the subtree starting at pos.
size_t subtree_end(const Monomial& m, size_t pos) {
  if (pos >= m.size()) throw AlgebraError("truncated tree code");
  if (!is_node(m[pos])) return pos + 1;
  int k = -m[pos];
  size_t p = pos + 1;
  for (int i = 0; i < k; ++i) p = subtree_end(m, p);
  return p;
}

struct Node {
  int code;
  std::vector<Node> kids;
};

Node to_node(const Monomial& m, size_t& pos) {
  Node n{m.at(pos++), {}};
  if (is_node(n.code))
    for (int i = 0; i < -n.code; ++i) n.kids.push_back(to_node(m, pos));
  return n;
}

void from_node(const Node& n, Monomial& out) {
  out.push_back(n.code);
  for (const auto& k : n.kids) from_node(k, out);
}

bool node_is_unit(const Node& n) { return is_unit_code(n.code); }

// Apply the strict-unit rule at n if it is a redex. Returns false when the
// whole tree becomes zero.
bool rewrite_at(Node& n) {
  int k = -n.code;
  int unit_pos = -1;
  for (int i = 0; i < k; ++i)
    if (node_is_unit(n.kids[i])) unit_pos = i;
  if (unit_pos < 0) return true;
  if (k >= 3) return false;
  Node keep = n.kids[1 - unit_pos];
  n = keep;
  return true;
}

bool bottom_up(Node& n) {
  if (!is_node(n.code)) return true;
  for (auto& k : n.kids)
    if (!bottom_up(k)) return false;
  return rewrite_at(n);
}

void collect_redexes(Node& n, std::vector<Node*>& out) {
  if (!is_node(n.code)) return;
  for (auto& k : n.kids) {
    if (node_is_unit(k)) {
      out.push_back(&n);
      break;
    }
  }
  for (auto& k : n.kids) collect_redexes(k, out);
}

}  // namespace

int monomial_target(const GradedQuiver& q, Kind, const Monomial& m) {
  for (int c : m)
    if (!is_node(c)) return leaf_target(q, c);
  throw AlgebraError("empty monomial");
}

int monomial_source(const GradedQuiver& q, Kind, const Monomial& m) {
  if (m.empty()) throw AlgebraError("empty monomial");
  return leaf_source(q, m.back());
}

int monomial_degree(const GradedQuiver& q, Kind, const Monomial& m) {
  int deg = 0;
  for (int c : m) {
    if (is_unit_code(c)) continue;
    if (c < 0)
      deg += 2 + c;  // 2 - k with c = -k
    else
      deg += q.generator(c).degree;
  }
  return deg;
}

int leaf_count(const Monomial& m) {
  int n = 0;
  for (int c : m) n += c >= 0;
  return n;
}

int max_node_arity(const Monomial& m) {
  int a = 0;
  for (int c : m)
    if (is_node(c)) a = std::max(a, -c);
  return a;
}

std::vector<int> leaves(const Monomial& m) {
  std::vector<int> out;
  for (int c : m)
    if (c >= 0) out.push_back(c);
  return out;
}

void check_monomial(const GradedQuiver& q, Kind kind, const Monomial& m) {
  if (m.empty()) throw AlgebraError("empty monomial");
  int nobj = static_cast<int>(q.objects().size());
  int ngen = static_cast<int>(q.generators().size());
  for (int c : m) {
    if (c >= ngen) throw AlgebraError("unknown generator id in monomial");
    if (is_unit_code(c) && unit_object(c) >= nobj) throw AlgebraError("unit at unknown object");
  }
  if (is_unit(m)) return;
  std::vector<int> seq;
  if (kind == Kind::DG) {
    for (int c : m) {
      if (c < 0) throw AlgebraError("DG words contain generators only");
      seq.push_back(c);
    }
  } else {
    if (subtree_end(m, 0) != m.size()) throw AlgebraError("malformed tree code");
    if (m.size() > 1 && !is_node(m[0])) throw AlgebraError("malformed tree code");
    for (int c : m) {
      if (is_unit_code(c)) throw AlgebraError("unit inside a tree (not in normal form)");
      if (is_node(c) && -c < 2) throw AlgebraError("node of arity < 2");
      if (c >= 0) seq.push_back(c);
    }
  }
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (q.generator(seq[i]).source != q.generator(seq[i + 1]).target)
      throw AlgebraError("non-composable monomial");
}

Monomial concat_words(const Monomial& a, const Monomial& b) {
  if (is_unit(a)) return b;
  if (is_unit(b)) return a;
  Monomial out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool graft_monomial(int k, const std::vector<Monomial>& children, Monomial& out) {
  if (k < 2 || static_cast<int>(children.size()) != k) throw AlgebraError("bad graft arity");
  int units = 0, unit_pos = -1;
  for (int i = 0; i < k; ++i)
    if (is_unit(children[i])) {
      ++units;
      unit_pos = i;
    }
  if (units > 0) {
    if (k >= 3) return false;
    out = children[1 - unit_pos];
    return true;
  }
  out.clear();
  out.push_back(-k);
  for (const auto& c : children) out.insert(out.end(), c.begin(), c.end());
  return true;
}

bool normalize_units(const Monomial& m, Monomial& out) {
  size_t pos = 0;
  Node n = to_node(m, pos);
  if (!bottom_up(n)) return false;
  out.clear();
  from_node(n, out);
  return true;
}

bool normalize_units_random(const Monomial& m, Monomial& out, std::mt19937& rng) {
  size_t pos = 0;
  Node n = to_node(m, pos);
  for (;;) {
    std::vector<Node*> redexes;
    collect_redexes(n, redexes);
    if (redexes.empty()) break;
    Node* r = redexes[std::uniform_int_distribution<size_t>(0, redexes.size() - 1)(rng)];
    if (!rewrite_at(*r)) return false;
  }
  out.clear();
  from_node(n, out);
  return true;
}

bool shadow_word(const Monomial& tree, Monomial& out) {
  out.clear();
  if (is_unit(tree)) {
    out = tree;
    return true;
  }
  for (int c : tree) {
    if (is_node(c) && c != -2) return false;
    if (c >= 0) out.push_back(c);
  }
  return true;
}

// ---------------------------------------------------------------------------
// elements

Scalar Element::coefficient(const Monomial& m) const {
  auto it = terms.find(m);
  return it == terms.end() ? Scalar(0) : it->second;
}

bool Element::operator==(const Element& o) const {
  if (kind != o.kind || ring != o.ring || terms != o.terms) return false;
  if (typed() && o.typed())
    return source == o.source && target == o.target && degree == o.degree;
  return true;
}

Element zero_element(Kind kind, const RingSpec& ring) {
  Element e;
  e.kind = kind;
  e.ring = ring;
  return e;
}

Element typed_zero(Kind kind, const RingSpec& ring, int source, int target, int degree) {
  Element e = zero_element(kind, ring);
  e.source = source;
  e.target = target;
  e.degree = degree;
  return e;
}

Element monomial_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const Monomial& m,
                         const Scalar& c) {
  check_monomial(q, kind, m);
  Element e = typed_zero(kind, ring, monomial_source(q, kind, m), monomial_target(q, kind, m),
                         monomial_degree(q, kind, m));
  add_term(e, m, c);
  return e;
}

Element generator_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const std::string& name) {
  int id = q.generator_index(name);
  if (id < 0) throw AlgebraError("unknown generator: " + name);
  return monomial_element(q, kind, ring, {id});
}

Element unit_element(Kind kind, const RingSpec& ring, int object) {
  Element e = typed_zero(kind, ring, object, object, 0);
  e.terms[unit_monomial(object)] = ring.normalize(1);
  return e;
}

void add_term(Element& e, const Monomial& m, const Scalar& c) {
  Scalar v = e.ring.normalize(c);
  if (v == 0) return;
  auto it = e.terms.find(m);
  if (it == e.terms.end()) {
    e.terms.emplace(m, v);
    return;
  }
  it->second = e.ring.add(it->second, v);
  if (it->second == 0) e.terms.erase(it);
}

namespace {

void adopt_type(Element& out, const Element& a, const Element& b) {
  if (a.kind != b.kind) throw AlgebraError("mixing DG and A-infinity elements");
  if (a.ring != b.ring) throw AlgebraError("mixing coefficient rings");
  if (a.typed() && b.typed() &&
      (a.source != b.source || a.target != b.target || a.degree != b.degree))
    throw AlgebraError("inhomogeneous sum of elements");
  const Element& t = a.typed() ? a : b;
  out.source = t.source;
  out.target = t.target;
  out.degree = t.degree;
}

}  // namespace

Element add(const Element& a, const Element& b) {
  Element out = a;
  adopt_type(out, a, b);
  for (const auto& [m, c] : b.terms) add_term(out, m, c);
  out.truncated = a.truncated || b.truncated;
  return out;
}

Element scale(const Element& a, const Scalar& c) {
  Element out = a;
  out.terms.clear();
  for (const auto& [m, v] : a.terms) add_term(out, m, a.ring.mul(c, v));
  return out;
}

Element sub(const Element& a, const Element& b) { return add(a, scale(b, -1)); }

Element compose_word(const GradedQuiver&, const Element& a, const Element& b) {
  if (a.kind != Kind::DG || b.kind != Kind::DG) throw AlgebraError("compose_word needs DG elements");
  if (a.ring != b.ring) throw AlgebraError("mixing coefficient rings");
  if (!a.typed() || !b.typed()) {
    Element z = zero_element(Kind::DG, a.ring);
    z.truncated = a.truncated || b.truncated;
    return z;
  }
  if (b.target != a.source) throw AlgebraError("compose_word: endpoints do not match");
  Element out = typed_zero(Kind::DG, a.ring, b.source, a.target, a.degree + b.degree);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) add_term(out, concat_words(ma, mb), a.ring.mul(ca, cb));
  out.truncated = a.truncated || b.truncated;
  return out;
}

Element graft(const GradedQuiver&, int k, const std::vector<Element>& children, int max_arity) {
  if (k < 2 || static_cast<int>(children.size()) != k) throw AlgebraError("graft: need k >= 2 children");
  if (max_arity > 0 && k > max_arity)
    throw AlgebraError("graft: arity " + std::to_string(k) + " exceeds max_arity");
  const RingSpec& ring = children[0].ring;
  bool truncated = false;
  for (const auto& c : children) {
    if (c.kind != Kind::Ainf) throw AlgebraError("graft needs A-infinity elements");
    truncated = truncated || c.truncated;
  }
  for (const auto& c : children)
    if (!c.typed()) {
      Element z = zero_element(Kind::Ainf, ring);
      z.truncated = truncated;
      return z;
    }
  int degree = 2 - k;
  for (int i = 0; i < k; ++i) {
    degree += children[i].degree;
    if (i + 1 < k && children[i].source != children[i + 1].target)
      throw AlgebraError("graft: children are not composable");
  }
  Element out = typed_zero(Kind::Ainf, ring, children[k - 1].source, children[0].target, degree);
  out.truncated = truncated;
  std::vector<Monomial> pick(k);
  std::function<void(int, Scalar)> rec = [&](int i, Scalar coef) {
    if (i == k) {
      Monomial m;
      if (graft_monomial(k, pick, m)) add_term(out, m, coef);
      return;
    }
    for (const auto& [m, c] : children[i].terms) {
      pick[i] = m;
      rec(i + 1, ring.mul(coef, c));
    }
  };
  rec(0, Scalar(1));
  return out;
}

Element truncate(const Element& e, const TruncationConfig& cfg) {
  Element out = e;
  out.terms.clear();
  for (const auto& [m, c] : e.terms) {
    if (leaf_count(m) > cfg.max_word_length)
      out.truncated = true;
    else
      out.terms.emplace(m, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// printing

namespace {

void print_tree(const GradedQuiver& q, const Monomial& m, size_t& pos, std::string& out) {
  int c = m.at(pos++);
  if (is_unit_code(c)) {
    out += "id@" + q.objects().at(unit_object(c));
  } else if (c >= 0) {
    out += q.generator(c).name;
  } else {
    out += "m" + std::to_string(-c) + "(";
    for (int i = 0; i < -c; ++i) {
      if (i) out += ",";
      print_tree(q, m, pos, out);
    }
    out += ")";
  }
}

}  // namespace

std::string monomial_to_string(const GradedQuiver& q, Kind kind, const Monomial& m) {
  if (is_unit(m)) return "id@" + q.objects().at(unit_object(m[0]));
  std::string out;
  if (kind == Kind::DG) {
    for (size_t i = 0; i < m.size(); ++i) {
      if (i) out += "*";
      out += q.generator(m[i]).name;
    }
    return out;
  }
  size_t pos = 0;
  print_tree(q, m, pos, out);
  return out;
}

std::string element_to_string(const GradedQuiver& q, const Element& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : e.terms) {
    Scalar v = c;
    bool negative = v < 0;
    if (negative) v = -v;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (v != 1) out += v.get_str() + "*";
    out += monomial_to_string(q, e.kind, m);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
 public:
  Parser(const GradedQuiver& q, Kind kind, const RingSpec& ring, const std::string& text)
      : q_(q), kind_(kind), ring_(ring), s_(text) {}

  Element parse() {
    Element e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("element syntax: " + msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Element expr() {
    Element acc = zero_element(kind_, ring_);
    bool negate = false;
    if (peek('+')) {
      ++pos_;
    } else if (peek('-')) {
      ++pos_;
      negate = true;
    }
    for (;;) {
      Element t = term();
      acc = add(acc, negate ? scale(t, -1) : t);
      if (peek('+')) {
        ++pos_;
        negate = false;
      } else if (peek('-')) {
        ++pos_;
        negate = true;
      } else {
        break;
      }
    }
    return acc;
  }

  Element term() {
    Scalar coef = 1;
    std::optional<Element> acc;
    bool first = true;
    for (;;) {
      if (!first) {
        if (peek('*'))
          ++pos_;
        else if (!starts_factor())
          break;
      }
      first = false;
      skip();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        coef *= number();
        continue;
      }
      Element f = factor();
      if (!acc) {
        acc = f;
      } else if (kind_ == Kind::DG) {
        if (acc->typed() && f.typed() && f.target != acc->source) fail("non-composable product");
        acc = compose_word(q_, *acc, f);
      } else {
        fail("use m2(a,b) for composition in A-infinity presentations");
      }
    }
    if (!acc) {
      if (coef == 0) return zero_element(kind_, ring_);
      fail("a scalar needs a morphism to multiply");
    }
    return scale(*acc, ring_.normalize(coef));
  }

  Scalar number() {
    auto digits = [&]() {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected digits");
      return mpz_class(s_.substr(start, pos_ - start));
    };
    mpz_class num = digits();
    if (peek('/')) {
      ++pos_;
      skip();
      mpz_class den = digits();
      if (den == 0) fail("zero denominator");
      Scalar out(num, den);
      out.canonicalize();
      return out;
    }
    return Scalar(num);
  }

  std::string ident() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return s_.substr(start, pos_ - start);
  }

  Element factor() {
    if (peek('(')) {
      ++pos_;
      Element e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    std::string name = ident();
    if (name == "id" && peek('@')) {
      ++pos_;
      std::string obj = ident();
      int o = q_.object_index(obj);
      if (o < 0) fail("unknown object " + obj);
      return unit_element(kind_, ring_, o);
    }
    static const std::regex node("m([0-9]+)");
    std::smatch match;
    if (std::regex_match(name, match, node) && peek('(')) {
      if (kind_ != Kind::Ainf) fail("m_k trees only exist in A-infinity presentations");
      int k = std::stoi(match[1].str());
      if (k < 2) fail("m_k needs k >= 2");
      ++pos_;
      std::vector<Element> kids;
      for (;;) {
        kids.push_back(expr());
        if (peek(',')) {
          ++pos_;
          continue;
        }
        if (peek(')')) {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      if (static_cast<int>(kids.size()) != k) fail("m" + std::to_string(k) + " needs " + std::to_string(k) + " arguments");
      try {
        return graft(q_, k, kids);
      } catch (const AlgebraError& e) {
        fail(e.what());
      }
    }
    if (q_.generator_index(name) < 0) fail("unknown generator " + name);
    return generator_element(q_, kind_, ring_, name);
  }

  const GradedQuiver& q_;
  Kind kind_;
  RingSpec ring_;
  std::string s_;
  size_t pos_ = 0;
};

}  // namespace

Element parse_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const std::string& text) {
  try {
    return Parser(q, kind, ring, text).parse();
  } catch (const ParseError&) {
    throw;
  } catch (const AlgebraError& e) {
    throw ParseError(std::string("element syntax: ") + e.what() + " in \"" + text + "\"");
  }
}

}  // namespace ainf
