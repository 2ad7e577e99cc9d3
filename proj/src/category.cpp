#include "ainf/category.hpp"

#include <omp.h>

#include <algorithm>
#include <climits>
#include <functional>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

namespace ainf {

// ---------------------------------------------------------------------------
// presentations

Element CategoryPresentation::d_of(int gen) const {
  auto it = diff.find(gen);
  if (it != diff.end()) return it->second;
  const auto& g = quiver.generator(gen);
  return typed_zero(kind, ring, g.source, g.target, g.degree + 1);
}

int CategoryPresentation::object(const std::string& label) const {
  int i = quiver.object_index(label);
  if (i < 0) throw AlgebraError("unknown object " + label + " in " + name);
  return i;
}

namespace {

struct GenSpec {
  std::string name, source, target;
  int degree;
};

void validate_presentation(const CategoryPresentation& cat) {
  for (const auto& [id, d] : cat.diff) {
    const auto& g = cat.quiver.generator(id);
    if (!d.typed()) continue;
    if (d.source != g.source || d.target != g.target || d.degree != g.degree + 1)
      throw AlgebraError("differential of " + g.name + " has the wrong endpoints or degree");
  }
  if (cat.kind == Kind::Ainf && !cat.relations.empty())
    throw AlgebraError("A-infinity presentations must be free");
}

CategoryPresentation make(const std::string& name, Kind kind, const RingSpec& ring,
                          const std::vector<std::string>& objects, const std::vector<GenSpec>& gens,
                          const std::vector<std::pair<std::string, std::string>>& diffs,
                          const std::vector<std::string>& relations = {}) {
  CategoryPresentation c;
  c.name = name;
  c.kind = kind;
  c.ring = ring;
  for (const auto& o : objects) c.quiver.add_object(o);
  for (const auto& g : gens) c.quiver.add_generator(g.name, g.source, g.target, g.degree);
  for (const auto& [g, text] : diffs) {
    Element d = c.parse(text);
    const auto& gen = c.quiver.generator(c.quiver.generator_index(g));
    if (!d.typed()) d = typed_zero(kind, ring, gen.source, gen.target, gen.degree + 1);
    c.diff[c.quiver.generator_index(g)] = d;
  }
  for (const auto& r : relations) c.relations.push_back(c.parse(r));
  validate_presentation(c);
  return c;
}

}  // namespace

CategoryPresentation builtin(const std::string& raw, const RingSpec& ring) {
  static const std::regex family("(C|P)\\(?(-?[0-9]+)\\)?");
  std::smatch m;
  const std::vector<GenSpec> fg{{"f", "1", "2", 0}, {"g", "2", "1", 0}};
  const std::vector<GenSpec> rs{{"r1", "1", "1", -1}, {"r2", "2", "2", -1}};
  if (raw == "empty") return make("empty", Kind::DG, ring, {}, {}, {});
  if (raw == "A") return make("A", Kind::DG, ring, {"3"}, {}, {});
  if (raw == "B") return make("B", Kind::DG, ring, {"4", "5"}, {}, {});
  if (raw == "terminal") return make("terminal", Kind::DG, ring, {"t"}, {}, {}, {"id@t"});
  if (raw == "I")
    return make("I", Kind::DG, ring, {"1", "2"}, {{"j01", "1", "2", 0}, {"j10", "2", "1", 0}}, {},
                {"j01*j10 - id@2", "j10*j01 - id@1"});
  if (raw == "E") return make("E", Kind::DG, ring, {"x"}, {{"rho", "x", "x", -1}}, {}, {"rho*rho"});
  if (raw == "I0") return make("I0", Kind::DG, ring, {"1", "2"}, {}, {});
  if (raw == "I1") return make("I1", Kind::DG, ring, {"1", "2"}, fg, {});
  std::vector<GenSpec> frs = fg;
  frs.insert(frs.end(), rs.begin(), rs.end());
  if (raw == "I2_dg")
    return make("I2_dg", Kind::DG, ring, {"1", "2"}, frs, {{"r1", "g*f - id@1"}, {"r2", "f*g - id@2"}});
  if (raw == "K") {
    auto gens = frs;
    gens.push_back({"r12", "1", "2", -2});
    return make("K", Kind::DG, ring, {"1", "2"}, gens,
                {{"r1", "g*f - id@1"}, {"r2", "f*g - id@2"}, {"r12", "r2*f - f*r1"}});
  }
  if (raw == "I1_ainf") return make("I1_ainf", Kind::Ainf, ring, {"1", "2"}, fg, {});
  if (raw == "K_ainf")
    return make("K_ainf", Kind::Ainf, ring, {"1", "2"}, frs,
                {{"r1", "m2(g,f) - id@1"}, {"r2", "m2(f,g) - id@2"}});
  if (std::regex_match(raw, m, family)) {
    int n = std::stoi(m[2]);
    std::string name = m[1].str() + "(" + std::to_string(n) + ")";
    if (m[1] == "C") return make(name, Kind::DG, ring, {"8", "9"}, {{"s", "8", "9", n}}, {});
    return make(name, Kind::DG, ring, {"6", "7"}, {{"e", "6", "7", n - 1}, {"de", "6", "7", n}},
                {{"e", "de"}});
  }
  throw AlgebraError("unknown builtin category: " + raw);
}

std::vector<std::string> builtin_names() {
  return {"empty", "A", "B", "I", "I0", "I1", "I2_dg", "K", "C(n)", "P(n)", "K_ainf", "I1_ainf", "terminal", "E"};
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

CategoryPresentation parse_presentation(const std::string& text, const RingSpec& ring) {
  static const std::regex header("([A-Za-z_]+):(.*)");
  static const std::regex gen_line("([^:\\s]+)\\s*:\\s*(\\S+)\\s*->\\s*(\\S+)\\s*:\\s*(-?[0-9]+)");
  static const std::regex diff_line("([^=\\s]+)\\s*=\\s*(.+)");
  CategoryPresentation c;
  c.ring = ring;
  c.name = "file";
  std::string section;
  std::vector<std::pair<std::string, std::string>> diffs;
  std::vector<std::string> rels;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::smatch m;
    bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
    if (!indented && std::regex_match(t, m, header)) {
      section = m[1];
      std::string rest = trim(m[2]);
      if (section == "name") {
        c.name = rest;
      } else if (section == "kind") {
        if (rest == "dg")
          c.kind = Kind::DG;
        else if (rest == "ainf")
          c.kind = Kind::Ainf;
        else
          fail("kind must be dg or ainf");
      } else if (section == "objects") {
        for (const auto& o : split_list(rest)) c.quiver.add_object(o);
      } else if (section != "generators" && section != "diff" && section != "relations") {
        fail("unknown section " + section);
      } else if (!rest.empty()) {
        fail("section " + section + " takes indented lines");
      }
      continue;
    }
    if (section == "objects") {
      for (const auto& o : split_list(t)) c.quiver.add_object(o);
    } else if (section == "generators") {
      if (!std::regex_match(t, m, gen_line)) fail("expected 'name : src -> tgt : degree'");
      try {
        c.quiver.add_generator(m[1], m[2], m[3], std::stoi(m[4]));
      } catch (const AlgebraError& e) {
        fail(e.what());
      }
    } else if (section == "diff") {
      if (!std::regex_match(t, m, diff_line)) fail("expected 'name = element'");
      diffs.emplace_back(m[1], m[2]);
    } else if (section == "relations") {
      rels.push_back(t);
    } else {
      fail("unexpected line outside a section");
    }
  }
  for (const auto& [g, e] : diffs) {
    int id = c.quiver.generator_index(g);
    if (id < 0) throw ParseError("diff for unknown generator " + g);
    Element d = c.parse(e);
    const auto& gen = c.quiver.generator(id);
    if (!d.typed()) d = typed_zero(c.kind, ring, gen.source, gen.target, gen.degree + 1);
    c.diff[id] = d;
  }
  for (const auto& r : rels) c.relations.push_back(c.parse(r));
  try {
    validate_presentation(c);
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  }
  return c;
}

std::string presentation_to_text(const CategoryPresentation& c) {
  std::ostringstream out;
  out << "name: " << c.name << "\n";
  out << "kind: " << (c.kind == Kind::DG ? "dg" : "ainf") << "\n";
  out << "objects:";
  for (const auto& o : c.quiver.objects()) out << " " << o;
  out << "\n";
  if (!c.quiver.generators().empty()) {
    out << "generators:\n";
    for (const auto& g : c.quiver.generators())
      out << "  " << g.name << " : " << c.quiver.objects()[g.source] << " -> " << c.quiver.objects()[g.target]
          << " : " << g.degree << "\n";
  }
  if (!c.diff.empty()) {
    out << "diff:\n";
    for (const auto& [id, d] : c.diff) out << "  " << c.quiver.generator(id).name << " = " << c.show(d) << "\n";
  }
  if (!c.relations.empty()) {
    out << "relations:\n";
    for (const auto& r : c.relations) out << "  " << c.show(r) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// weights

int monomial_weight(const std::vector<int>& weights, const Monomial& m) {
  int w = 0;
  for (int c : m)
    if (c >= 0) w += weights[c];
  return w;
}

std::vector<int> generator_weights(const CategoryPresentation& cat, bool* fallback) {
  size_t n = cat.quiver.generators().size();
  std::vector<int> w(n, 1);
  if (fallback) *fallback = false;
  for (size_t iter = 0; iter <= n + 1; ++iter) {
    bool changed = false;
    for (const auto& [id, d] : cat.diff) {
      int mx = 1;
      for (const auto& [m, c] : d.terms) mx = std::max(mx, monomial_weight(w, m));
      if (mx > w[id]) {
        w[id] = mx;
        changed = true;
      }
    }
    if (!changed) return w;
  }
  if (fallback) *fallback = true;
  return std::vector<int>(n, 1);
}

bool monomial_less(const std::vector<int>& weights, const Monomial& a, const Monomial& b) {
  int wa = monomial_weight(weights, a), wb = monomial_weight(weights, b);
  if (wa != wb) return wa < wb;
  int la = leaf_count(a), lb = leaf_count(b);
  if (la != lb) return la < lb;
  return a < b;
}

// ---------------------------------------------------------------------------
// differential

namespace {

/// Memoised m^1 on monomials. Not thread safe; use one per thread.
class M1Engine {
 public:
  explicit M1Engine(const CategoryPresentation& cat) : cat_(cat) {}

  Element apply(const Element& e) {
    if (!e.typed()) return zero_element(cat_.kind, cat_.ring);
    Element out = typed_zero(cat_.kind, cat_.ring, e.source, e.target, e.degree + 1);
    for (const auto& [m, c] : e.terms) {
      const Element& dm = monomial(m);
      for (const auto& [m2, c2] : dm.terms) add_term(out, m2, cat_.ring.mul(c, c2));
    }
    return out;
  }

  const Element& monomial(const Monomial& m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    Element r = cat_.kind == Kind::DG ? word(m) : tree(m);
    return memo_.emplace(m, std::move(r)).first->second;
  }

 private:
  Element zero_for(const Monomial& m) {
    const auto& q = cat_.quiver;
    return typed_zero(cat_.kind, cat_.ring, monomial_source(q, cat_.kind, m), monomial_target(q, cat_.kind, m),
                      monomial_degree(q, cat_.kind, m) + 1);
  }

  Element word(const Monomial& w) {
    Element out = zero_for(w);
    if (is_unit(w)) return out;
    int prefix = 0;
    for (size_t i = 0; i < w.size(); ++i) {
      Element d = cat_.d_of(w[i]);
      Scalar sign = cat_.ring.sign(prefix);
      for (const auto& [m, c] : d.terms) {
        Monomial r(w.begin(), w.begin() + i);
        if (!is_unit(m)) r.insert(r.end(), m.begin(), m.end());
        r.insert(r.end(), w.begin() + i + 1, w.end());
        if (r.empty()) r = m;
        add_term(out, r, cat_.ring.mul(sign, c));
      }
      prefix += cat_.quiver.generator(w[i]).degree;
    }
    return out;
  }

  // Children spans of the root node of a tree.
  static std::vector<Monomial> children(const Monomial& t) {
    int k = -t[0];
    std::vector<Monomial> out;
    size_t pos = 1;
    for (int i = 0; i < k; ++i) {
      size_t start = pos;
      int need = 1;
      while (need > 0) {
        int c = t[pos++];
        --need;
        if (c < 0 && !is_unit_code(c)) need += -c;
      }
      out.emplace_back(t.begin() + start, t.begin() + pos);
    }
    return out;
  }

  Element tree(const Monomial& t) {
    Element out = zero_for(t);
    if (is_unit(t)) return out;
    if (t.size() == 1) return cat_.d_of(t[0]);
    const auto& q = cat_.quiver;
    const RingSpec& ring = cat_.ring;
    auto ch = children(t);
    int k = static_cast<int>(ch.size());
    std::vector<int> deg(k);
    for (int i = 0; i < k; ++i) deg[i] = monomial_degree(q, Kind::Ainf, ch[i]);
    int eps = 0;
    std::vector<Monomial> args = ch;
    Monomial g;
    for (int r = 0; r < k; ++r) {
      // s = 1 terms
      Scalar sign = ring.sign(k + eps);
      const Element& dr = monomial(ch[r]);
      for (const auto& [m, c] : dr.terms) {
        args[r] = m;
        if (graft_monomial(k, args, g)) add_term(out, g, ring.mul(sign, c));
      }
      args[r] = ch[r];
      // 2 <= s <= k - 1 terms
      for (int s = 2; s <= k - 1 && r + s <= k; ++s) {
        int tt = k - r - s;
        std::vector<Monomial> inner(ch.begin() + r, ch.begin() + r + s);
        Monomial in;
        graft_monomial(s, inner, in);
        std::vector<Monomial> outer(ch.begin(), ch.begin() + r);
        outer.push_back(in);
        outer.insert(outer.end(), ch.begin() + r + s, ch.end());
        Monomial o;
        graft_monomial(k - s + 1, outer, o);
        add_term(out, o, ring.neg(ring.sign(r + s * tt + s * eps)));
      }
      eps += deg[r];
    }
    return out;
  }

  const CategoryPresentation& cat_;
  std::map<Monomial, Element> memo_;
};

}  // namespace

Element m1_expand(const CategoryPresentation& cat, const Element& e) {
  M1Engine eng(cat);
  return eng.apply(e);
}

Element m_k(const CategoryPresentation& cat, int k, const std::vector<Element>& args) {
  if (k < 1 || static_cast<int>(args.size()) != k) throw AlgebraError("m_k: wrong number of arguments");
  if (k == 1) return m1_expand(cat, args[0]);
  if (cat.kind == Kind::Ainf) return graft(cat.quiver, k, args);
  if (k == 2) return compose_word(cat.quiver, args[0], args[1]);
  for (const auto& a : args)
    if (!a.typed()) return zero_element(cat.kind, cat.ring);
  int degree = 2 - k;
  for (const auto& a : args) degree += a.degree;
  return typed_zero(cat.kind, cat.ring, args.back().source, args.front().target, degree);
}

// ---------------------------------------------------------------------------
// window enumeration

namespace {

// Generator paths (post-composed factor first) from x to y of weight <= L.
void enumerate_paths(const GradedQuiver& q, const std::vector<int>& weights, int x, int y, int L,
                     std::vector<std::vector<int>>& out) {
  std::vector<std::vector<int>> by_source(q.objects().size());
  for (size_t i = 0; i < q.generators().size(); ++i) by_source[q.generator(i).source].push_back(i);
  std::vector<int> rev;
  std::function<void(int, int)> rec = [&](int cur, int w) {
    if (cur == y && !rev.empty()) out.emplace_back(rev.rbegin(), rev.rend());
    for (int g : by_source[cur]) {
      if (w + weights[g] > L) continue;
      rev.push_back(g);
      rec(q.generator(g).target, w + weights[g]);
      rev.pop_back();
    }
  };
  rec(x, 0);
}

// Planar tree shapes on n leaves with node arity in [2, A]; leaves are
// written as placeholder code 0 and filled in order.
const std::vector<Monomial>& shapes(int n, int A) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Monomial>> memo;
  std::lock_guard<std::mutex> lock(mu);
  std::function<const std::vector<Monomial>&(int)> get = [&](int m) -> const std::vector<Monomial>& {
    auto key = std::make_pair(m, A);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Monomial> res;
    if (m == 1) {
      res.push_back({0});
    } else {
      for (int k = 2; k <= std::min(A, m); ++k) {
        // compositions of m into k positive parts
        std::vector<int> parts(k, 1);
        std::function<void(int, int)> split = [&](int i, int left) {
          if (i == k - 1) {
            parts[i] = left;
            std::vector<const std::vector<Monomial>*> subs;
            for (int p : parts) subs.push_back(&get(p));
            std::vector<size_t> idx(k, 0);
            while (true) {
              Monomial t{-k};
              for (int j = 0; j < k; ++j) {
                const auto& s = (*subs[j])[idx[j]];
                t.insert(t.end(), s.begin(), s.end());
              }
              res.push_back(t);
              int j = k - 1;
              while (j >= 0 && ++idx[j] == subs[j]->size()) idx[j--] = 0;
              if (j < 0) break;
            }
            return;
          }
          for (int p = 1; p <= left - (k - 1 - i); ++p) {
            parts[i] = p;
            split(i + 1, left - p);
          }
        };
        split(0, m);
      }
    }
    return memo.emplace(key, std::move(res)).first->second;
  };
  return get(n);
}

Monomial fill(const Monomial& shape, const std::vector<int>& path) {
  Monomial out = shape;
  size_t j = 0;
  for (auto& c : out)
    if (c >= 0) c = path[j++];
  return out;
}

int node_shift(const Monomial& shape) {
  int s = 0;
  for (int c : shape)
    if (c < 0) s += 2 + c;
  return s;
}

std::vector<Monomial> window_monomials_range(const CategoryPresentation& cat, const std::vector<int>& weights,
                                            int x, int y, const TruncationConfig& cfg,
                                            std::optional<std::pair<int, int>> degrees) {
  const auto& q = cat.quiver;
  std::vector<std::vector<int>> paths;
  enumerate_paths(q, weights, x, y, cfg.max_word_length, paths);
  std::vector<Monomial> out;
  auto in_range = [&](int d) { return !degrees || (d >= degrees->first && d <= degrees->second); };
  if (x == y && in_range(0)) out.push_back(unit_monomial(x));
  for (const auto& p : paths) {
    int pd = 0;
    for (int g : p) pd += q.generator(g).degree;
    if (cat.kind == Kind::DG) {
      if (in_range(pd)) out.push_back(p);
      continue;
    }
    int n = static_cast<int>(p.size());
    if (n == 1) {
      if (in_range(pd)) out.push_back(p);
      continue;
    }
    if (degrees && (pd + 2 - n > degrees->second || pd < degrees->first)) continue;
    for (const auto& s : shapes(n, cfg.max_arity))
      if (in_range(pd + node_shift(s))) out.push_back(fill(s, p));
  }
  std::sort(out.begin(), out.end(),
            [&](const Monomial& a, const Monomial& b) { return monomial_less(weights, a, b); });
  return out;
}

}  // namespace

std::vector<Monomial> window_monomials(const CategoryPresentation& cat, const std::vector<int>& weights, int x,
                                       int y, const TruncationConfig& cfg) {
  return window_monomials_range(cat, weights, x, y, cfg, std::nullopt);
}

// ---------------------------------------------------------------------------
// exactness of windows

namespace {

// Leading monomial of a relation with unit coefficient, or false.
bool relation_lead(const RingSpec& ring, const std::vector<int>& w, const Element& r, Monomial& lead,
                   Scalar& coef) {
  if (r.terms.empty()) return false;
  auto best = r.terms.begin();
  for (auto it = r.terms.begin(); it != r.terms.end(); ++it)
    if (monomial_less(w, best->first, it->first)) best = it;
  lead = best->first;
  coef = best->second;
  return ring.is_unit(coef);
}

struct Rewriter {
  const CategoryPresentation& cat;
  std::vector<int> w;
  std::vector<Monomial> leads;
  std::vector<Element> rhs;  // lead = rhs
  bool ok = true;

  Rewriter(const CategoryPresentation& c, const std::vector<int>& weights) : cat(c), w(weights) {
    for (const auto& r : cat.relations) {
      Monomial lead;
      Scalar coef;
      if (!relation_lead(cat.ring, w, r, lead, coef) || lead.size() > 2) {
        ok = false;
        return;
      }
      Element rest = r;
      rest.terms.erase(lead);
      leads.push_back(lead);
      rhs.push_back(scale(rest, cat.ring.neg(cat.ring.inverse(coef))));
    }
  }

  // Position and rule of the first lead occurring in m, or -1.
  int find(const Monomial& m, size_t& pos) const {
    for (size_t i = 0; i < leads.size(); ++i) {
      const auto& l = leads[i];
      if (is_unit(l)) {
        if (m == l) {
          pos = 0;
          return static_cast<int>(i);
        }
        continue;
      }
      if (is_unit(m)) continue;
      for (size_t p = 0; p + l.size() <= m.size(); ++p)
        if (std::equal(l.begin(), l.end(), m.begin() + p)) {
          pos = p;
          return static_cast<int>(i);
        }
    }
    return -1;
  }

  Element normal_form(const Element& e) const {
    Element cur = e;
    for (int guard = 0; guard < 100000; ++guard) {
      Monomial hit;
      int rule = -1;
      size_t pos = 0;
      for (const auto& [m, c] : cur.terms) {
        rule = find(m, pos);
        if (rule >= 0) {
          hit = m;
          break;
        }
      }
      if (rule < 0) return cur;
      Scalar c = cur.terms.at(hit);
      cur.terms.erase(hit);
      const auto& l = leads[rule];
      Monomial left, right;
      if (!is_unit(l)) {
        left.assign(hit.begin(), hit.begin() + pos);
        right.assign(hit.begin() + pos + l.size(), hit.end());
      }
      for (const auto& [m, v] : rhs[rule].terms) {
        Monomial r = left;
        if (!is_unit(m)) r.insert(r.end(), m.begin(), m.end());
        r.insert(r.end(), right.begin(), right.end());
        if (r.empty()) r = m;
        add_term(cur, r, cat.ring.mul(c, v));
      }
    }
    throw AlgebraError("rewriting did not terminate");
  }

  bool confluent() const {
    const auto& q = cat.quiver;
    for (size_t i = 0; i < leads.size(); ++i)
      for (size_t j = 0; j < leads.size(); ++j) {
        const auto& a = leads[i];
        const auto& b = leads[j];
        if (is_unit(a) || is_unit(b) || a.size() != 2 || b.size() != 2 || a[1] != b[0]) continue;
        Monomial word{a[0], a[1], b[1]};
        Element e = monomial_element(q, Kind::DG, cat.ring, word);
        // rewrite the left overlap first
        Element l = typed_zero(Kind::DG, cat.ring, e.source, e.target, e.degree);
        for (const auto& [m, c] : rhs[i].terms) {
          Monomial r = is_unit(m) ? Monomial{} : m;
          r.push_back(b[1]);
          add_term(l, r, c);
        }
        Element r = typed_zero(Kind::DG, cat.ring, e.source, e.target, e.degree);
        for (const auto& [m, c] : rhs[j].terms) {
          Monomial t{a[0]};
          if (!is_unit(m)) t.insert(t.end(), m.begin(), m.end());
          add_term(r, t, c);
        }
        if (normal_form(l) != normal_form(r)) return false;
      }
    return true;
  }
};

// Whether every normal monomial from x to y has weight <= L (and at most A
// leaves for trees).
bool window_is_exact(const CategoryPresentation& cat, const std::vector<int>& w, int x, int y,
                     const TruncationConfig& cfg) {
  const auto& q = cat.quiver;
  Rewriter rw(cat, w);
  if (!rw.ok || !rw.confluent()) return false;
  std::set<Monomial> banned(rw.leads.begin(), rw.leads.end());
  int ng = static_cast<int>(q.generators().size());
  // A state is the last generator appended (on the source side), or -1 at start.
  // Walk generators from the source side: the word is reversed.
  std::vector<bool> allowed_start(ng, false);
  for (int g = 0; g < ng; ++g)
    allowed_start[g] = q.generator(g).source == x && !banned.count(Monomial{g});
  auto next_ok = [&](int prev, int g) {
    // word ... g prev ...  (g applied after prev)
    return q.generator(g).source == q.generator(prev).target && !banned.count(Monomial{g}) &&
           !banned.count(Monomial{g, prev});
  };
  // co-reachability to target y: states whose continuation may end at y
  std::vector<bool> coreach(ng, false);
  for (int g = 0; g < ng; ++g) coreach[g] = q.generator(g).target == y;
  for (bool changed = true; changed;) {
    changed = false;
    for (int p = 0; p < ng; ++p)
      if (!coreach[p])
        for (int g = 0; g < ng; ++g)
          if (coreach[g] && next_ok(p, g)) {
            coreach[p] = true;
            changed = true;
            break;
          }
  }
  // longest path weight/length from each state, detecting cycles
  std::vector<int> state(ng, 0);  // 0 new, 1 active, 2 done
  std::vector<int> best_w(ng, -1), best_n(ng, -1);
  bool cycle = false;
  std::function<void(int)> dfs = [&](int p) {
    state[p] = 1;
    int bw = q.generator(p).target == y ? w[p] : -1;
    int bn = q.generator(p).target == y ? 1 : -1;
    for (int g = 0; g < ng && !cycle; ++g) {
      if (!coreach[g] || !next_ok(p, g)) continue;
      if (state[g] == 1) {
        cycle = true;
        return;
      }
      if (state[g] == 0) dfs(g);
      if (best_w[g] >= 0) {
        bw = std::max(bw, best_w[g] + w[p]);
        bn = std::max(bn, best_n[g] + 1);
      }
    }
    best_w[p] = bw;
    best_n[p] = bn;
    state[p] = 2;
  };
  int max_w = 0, max_n = 0;
  for (int g = 0; g < ng && !cycle; ++g) {
    if (!allowed_start[g] || !coreach[g]) continue;
    if (state[g] == 0) dfs(g);
    max_w = std::max(max_w, best_w[g]);
    max_n = std::max(max_n, best_n[g]);
  }
  if (cycle) return false;
  if (max_w > cfg.max_word_length) return false;
  if (cat.kind == Kind::Ainf && max_n > cfg.max_arity) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// hom complexes

struct HomTruncation::DegreeData {
  std::vector<Monomial> monomials;
  std::map<Monomial, int> index;
  std::map<int, std::map<int, Scalar>> pivots;  // lead index -> row with lead coefficient 1
  std::vector<int> basis_idx;
  std::map<int, int> basis_pos;
  std::vector<Monomial> basis;
};

namespace {

using SparseRow = std::map<int, Scalar>;

void reduce_row(const RingSpec& ring, const std::map<int, SparseRow>& pivots, SparseRow& v) {
  int cur = INT_MAX;
  while (true) {
    auto it = v.lower_bound(cur);
    if (it == v.begin()) break;
    --it;
    cur = it->first;
    auto p = pivots.find(cur);
    if (p == pivots.end()) continue;
    Scalar c = it->second;
    for (const auto& [j, x] : p->second) {
      Scalar nv = ring.sub(v.count(j) ? v[j] : Scalar(0), ring.mul(c, x));
      if (nv == 0)
        v.erase(j);
      else
        v[j] = nv;
    }
  }
}

std::optional<SparseRow> to_row(const HomTruncation::DegreeData& d, const Element& e) {
  SparseRow row;
  for (const auto& [m, c] : e.terms) {
    auto it = d.index.find(m);
    if (it == d.index.end()) return std::nullopt;
    row[it->second] = c;
  }
  return row;
}

std::string key_of(const CategoryPresentation& cat, int x, int y, const HomOptions& o) {
  std::ostringstream s;
  s << presentation_to_text(cat) << "|" << cat.ring.flag() << "|" << x << "," << y << "|"
    << o.cfg.max_word_length << "," << o.cfg.max_arity;
  if (o.degrees) s << "|" << o.degrees->first << "," << o.degrees->second;
  return s.str();
}

std::shared_ptr<const HomTruncation> build_hom(const CategoryPresentation& cat, int x, int y,
                                               const HomOptions& o) {
  const auto& q = cat.quiver;
  const RingSpec& ring = cat.ring;
  if (x < 0 || y < 0 || x >= static_cast<int>(q.objects().size()) || y >= static_cast<int>(q.objects().size()))
    throw AlgebraError("hom_complex: unknown object");
  auto h = std::make_shared<HomTruncation>();
  h->source = x;
  h->target = y;
  h->options = o;
  h->kind = cat.kind;
  h->ring = ring;
  h->weights = generator_weights(cat);
  const auto& w = h->weights;
  auto mons = window_monomials_range(cat, w, x, y, o.cfg, o.degrees);
  std::map<int, std::shared_ptr<HomTruncation::DegreeData>> data;
  for (const auto& m : mons) {
    int k = monomial_degree(q, cat.kind, m);
    auto& d = data[k];
    if (!d) d = std::make_shared<HomTruncation::DegreeData>();
    d->index[m] = static_cast<int>(d->monomials.size());
    d->monomials.push_back(m);
  }
  if (o.degrees)
    for (int k = o.degrees->first; k <= o.degrees->second; ++k)
      if (!data[k]) data[k] = std::make_shared<HomTruncation::DegreeData>();
  // relation multiples u * R * v inside the window
  std::vector<std::pair<int, SparseRow>> multiples;
  for (const auto& r : cat.relations) {
    if (!r.typed() || r.is_zero()) continue;
    int rw = 0;
    for (const auto& [m, c] : r.terms) rw = std::max(rw, monomial_weight(w, m));
    if (rw > o.cfg.max_word_length) continue;
    int room = o.cfg.max_word_length - rw;
    std::vector<std::vector<int>> us, vs;
    if (r.target == y) us.push_back({});
    if (r.source == x) vs.push_back({});
    enumerate_paths(q, w, r.target, y, room, us);
    enumerate_paths(q, w, x, r.source, room, vs);
    for (const auto& u : us)
      for (const auto& v : vs) {
        int uw = 0, vw = 0, ud = 0, vd = 0;
        for (int g : u) uw += w[g], ud += q.generator(g).degree;
        for (int g : v) vw += w[g], vd += q.generator(g).degree;
        if (uw + vw > room) continue;
        int k = ud + r.degree + vd;
        auto it = data.find(k);
        if (it == data.end()) continue;
        SparseRow row;
        bool ok = true;
        for (const auto& [m, c] : r.terms) {
          Monomial t = u;
          if (!is_unit(m)) t.insert(t.end(), m.begin(), m.end());
          t.insert(t.end(), v.begin(), v.end());
          if (t.empty()) t = m;
          auto jt = it->second->index.find(t);
          if (jt == it->second->index.end()) {
            ok = false;
            break;
          }
          row[jt->second] = c;
        }
        if (ok) multiples.emplace_back(k, row);
      }
  }
  for (auto& [k, row] : multiples) {
    auto& d = *data[k];
    SparseRow v = row;
    reduce_row(ring, d.pivots, v);
    if (v.empty()) continue;
    auto lead = std::prev(v.end());
    Scalar c = lead->second;
    if (!ring.is_unit(c))
      throw WindowError("relation span has a non-unit leading coefficient in " + cat.name);
    Scalar inv = ring.inverse(c);
    for (auto& [j, x2] : v) x2 = ring.mul(x2, inv);
    d.pivots[lead->first] = v;
  }
  for (auto& [k, d] : data) {
    for (int i = 0; i < static_cast<int>(d->monomials.size()); ++i)
      if (!d->pivots.count(i)) {
        d->basis_pos[i] = static_cast<int>(d->basis.size());
        d->basis_idx.push_back(i);
        d->basis.push_back(d->monomials[i]);
      }
  }
  std::map<int, std::vector<std::string>> labels;
  for (auto& [k, d] : data) {
    auto& lab = labels[k];
    for (const auto& m : d->basis) {
      std::string s = monomial_to_string(q, cat.kind, m);
      lab.push_back(s);
      h->basis_dictionary[s] = m;
    }
  }
  // differential
  M1Engine eng(cat);
  std::map<int, Matrix> diffs;
  auto coords_in = [&](const HomTruncation::DegreeData& d, const Element& e, const std::string& what) {
    auto row = to_row(d, e);
    if (!row) {
      std::string bad;
      for (const auto& [m, c] : e.terms)
        if (!d.index.count(m)) {
          bad = monomial_to_string(q, cat.kind, m);
          break;
        }
      throw WindowError("window not differential-closed: " + what + " contains " + bad);
    }
    reduce_row(ring, d.pivots, *row);
    return *row;
  };
  for (auto& [k, d] : data) {
    auto nt = data.find(k + 1);
    if (nt == data.end()) {
      if (o.degrees && k == o.degrees->second) continue;
      // nothing in degree k + 1 inside the window: the differential must vanish
      for (const auto& m : d->basis) {
        Element dm = eng.apply(monomial_element(q, cat.kind, ring, m));
        if (!dm.is_zero()) {
          auto dummy = std::make_shared<HomTruncation::DegreeData>();
          coords_in(*dummy, dm, "d(" + monomial_to_string(q, cat.kind, m) + ")");
        }
      }
      continue;
    }
    const auto& t = *nt->second;
    Matrix mat(ring, static_cast<int>(t.basis.size()), static_cast<int>(d->basis.size()));
    for (size_t j = 0; j < d->basis.size(); ++j) {
      Element dm = eng.apply(monomial_element(q, cat.kind, ring, d->basis[j]));
      auto row = coords_in(t, dm, "d(" + monomial_to_string(q, cat.kind, d->basis[j]) + ")");
      for (const auto& [i, c] : row) mat.set(t.basis_pos.at(i), static_cast<int>(j), c);
    }
    diffs[k] = mat;
  }
  // relation multiples must stay in the relation span under d
  for (auto& [k, row] : multiples) {
    auto nt = data.find(k + 1);
    if (nt == data.end()) continue;
    const auto& d = *data[k];
    Element e = typed_zero(cat.kind, ring, x, y, k);
    for (const auto& [i, c] : row) add_term(e, d.monomials[i], c);
    Element de = eng.apply(e);
    if (de.is_zero()) continue;
    auto r2 = coords_in(*nt->second, de, "d(relation multiple)");
    if (!r2.empty()) throw WindowError("relations are not closed under the differential in " + cat.name);
  }
  for (auto& [k, d] : data) h->data[k] = d;
  h->result = FiniteComplex(ring, labels, diffs);
  h->exact_flag = window_is_exact(cat, w, x, y, o.cfg);
  return h;
}

}  // namespace

const std::vector<Monomial>& HomTruncation::basis(int k) const {
  static const std::vector<Monomial> empty;
  auto it = data.find(k);
  return it == data.end() ? empty : it->second->basis;
}

bool HomTruncation::contains(const Monomial& m) const {
  for (const auto& [k, d] : data)
    if (d->index.count(m)) return true;
  return false;
}

std::optional<Vector> HomTruncation::coordinates(const Element& e) const {
  if (!e.typed()) return std::nullopt;
  if (e.source != source || e.target != target) throw AlgebraError("coordinates: element has other endpoints");
  auto it = data.find(e.degree);
  if (it == data.end()) {
    if (e.is_zero()) return Vector{};
    return std::nullopt;
  }
  const auto& d = *it->second;
  auto row = to_row(d, e);
  if (!row) return std::nullopt;
  reduce_row(ring, d.pivots, *row);
  Vector v(d.basis.size(), Scalar(0));
  for (const auto& [i, c] : *row) v[d.basis_pos.at(i)] = c;
  return v;
}

Element HomTruncation::element_of(int k, const Vector& v) const {
  Element e = typed_zero(kind, ring, source, target, k);
  const auto& b = basis(k);
  for (size_t i = 0; i < v.size() && i < b.size(); ++i)
    if (v[i] != 0) add_term(e, b[i], v[i]);
  return e;
}

std::optional<Element> HomTruncation::reduce(const Element& e) const {
  auto v = coordinates(e);
  if (!v) return std::nullopt;
  return element_of(e.degree, *v);
}

std::shared_ptr<const HomTruncation> hom_complex(const CategoryPresentation& cat, int x, int y,
                                                 const HomOptions& options) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const HomTruncation>> cache;
  std::string key = key_of(cat, x, y, options);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto h = build_hom(cat, x, y, options);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 4096) cache.clear();
  return cache.emplace(key, h).first->second;
}

std::shared_ptr<const HomTruncation> hom_complex(const CategoryPresentation& cat, int x, int y,
                                                 const TruncationConfig& cfg) {
  return hom_complex(cat, x, y, HomOptions{cfg, std::nullopt});
}

// ---------------------------------------------------------------------------
// cohomology classes

HomClasses::HomClasses(std::shared_ptr<const HomTruncation> small, std::shared_ptr<const HomTruncation> big,
                       int k)
    : small_(std::move(small)), big_(std::move(big)), k_(k) {
  const RingSpec& ring = small_->ring;
  const auto& sb = small_->basis(k);
  int ns = static_cast<int>(sb.size());
  int nb = static_cast<int>(big_->basis(k).size());
  // inclusion of the small window into the big one
  Matrix inc(ring, nb, ns);
  for (int j = 0; j < ns; ++j) {
    auto c = big_->coordinates(monomial_element_typed(j));
    if (!c) throw WindowError("small window is not contained in the big window");
    for (int i = 0; i < nb; ++i)
      if ((*c)[i] != 0) inc.set(i, j, (*c)[i]);
  }
  auto zk = kernel_basis(small_->result.d(k));
  if (small_->result.d(k).rows() == 0) {
    zk.clear();
    for (int j = 0; j < ns; ++j) {
      Vector e(ns, Scalar(0));
      e[j] = 1;
      zk.push_back(e);
    }
  }
  Matrix zs = columns_matrix(ring, ns, zk);
  zs_ = inc * zs;
  boundary_ = big_->result.d(k - 1);
  if (boundary_.cols() == 0 || boundary_.rows() != nb) boundary_ = Matrix(ring, nb, 0);
  int r = zs_.cols();
  // relations among cycle coordinates: u with zs u in the boundary span
  Matrix joint = Matrix::hstack(zs_, boundary_.scaled(-1));
  std::vector<Vector> ker = r == 0 ? std::vector<Vector>{} : kernel_basis(joint);
  std::vector<Vector> rel;
  for (const auto& v : ker) rel.emplace_back(v.begin(), v.begin() + r);
  if (r == 0) {
    coord_ = Matrix(ring, 0, 0);
    return;
  }
  Matrix n = columns_matrix(ring, r, rel);
  Matrix u = Matrix::identity(ring, r), u_inv = Matrix::identity(ring, r);
  int rank = 0;
  if (n.cols() > 0) {
    auto snf = smith_normal_form(n);
    u = snf.u;
    u_inv = snf.u_inv;
    rank = snf.rank;
    for (const auto& d : snf.diagonal)
      if (!ring.is_unit(d)) torsion_.push_back(d);
  }
  std::vector<int> free_rows;
  for (int i = rank; i < r; ++i) free_rows.push_back(i);
  coord_ = u.select_rows(free_rows);
  for (int i : free_rows) {
    Vector ucol(r);
    for (int j = 0; j < r; ++j) ucol[j] = u_inv.at(j, i);
    reps_.push_back(small_->element_of(k, zs.apply(ucol)));
  }
  prefer_light_representatives(zs);
}

// Replace the representatives by cycles of smallest possible weight: cycles
// supported on the lightest basis monomials are tried first and kept while
// their classes stay independent (and, over Z, part of a basis).
void HomClasses::prefer_light_representatives(const Matrix& zs) {
  const RingSpec& ring = small_->ring;
  int f = free_rank();
  if (f == 0) return;
  const auto& sb = small_->basis(k_);
  int ns = static_cast<int>(sb.size());
  Matrix d = small_->result.d(k_);
  bool closed_all = d.rows() == 0 || d.cols() != ns;
  std::vector<int> cuts;
  for (int j = 1; j <= ns; ++j)
    if (j == ns || monomial_weight(small_->weights, sb[j]) != monomial_weight(small_->weights, sb[j - 1]))
      cuts.push_back(j);
  std::vector<Vector> chosen_cycles, chosen_coords;
  auto independent = [&](const std::vector<Vector>& cols) {
    Matrix m = columns_matrix(ring, f, cols);
    auto snf = smith_normal_form(m);
    if (snf.rank != static_cast<int>(cols.size())) return false;
    for (const auto& x : snf.diagonal)
      if (!ring.is_unit(x)) return false;
    return true;
  };
  for (int cut : cuts) {
    if (static_cast<int>(chosen_cycles.size()) == f) break;
    std::vector<int> prefix(cut);
    for (int j = 0; j < cut; ++j) prefix[j] = j;
    std::vector<Vector> ker;
    if (closed_all) {
      for (int j = 0; j < cut; ++j) {
        Vector e(cut, Scalar(0));
        e[j] = 1;
        ker.push_back(e);
      }
    } else {
      ker = kernel_basis(d.select_columns(prefix));
    }
    for (auto z : ker) {
      if (static_cast<int>(chosen_cycles.size()) == f) break;
      z.resize(ns, Scalar(0));
      auto u = solve(zs, z);
      if (!u) continue;
      Vector c = coord_.apply(*u);
      auto trial = chosen_coords;
      trial.push_back(c);
      if (!independent(trial)) continue;
      chosen_coords = trial;
      chosen_cycles.push_back(z);
    }
  }
  if (static_cast<int>(chosen_cycles.size()) != f) return;
  Matrix t = columns_matrix(ring, f, chosen_coords);
  Matrix t_inv(ring, f, f);
  for (int i = 0; i < f; ++i) {
    Vector e(f, Scalar(0));
    e[i] = 1;
    auto x = solve(t, e);
    if (!x) return;
    for (int j = 0; j < f; ++j)
      if ((*x)[j] != 0) t_inv.set(j, i, (*x)[j]);
  }
  coord_ = t_inv * coord_;
  reps_.clear();
  for (const auto& z : chosen_cycles) reps_.push_back(small_->element_of(k_, z));
}

Element HomClasses::monomial_element_typed(int j) const {
  const auto& m = small_->basis(k_)[j];
  Element e = typed_zero(small_->kind, small_->ring, small_->source, small_->target, k_);
  add_term(e, m, Scalar(1));
  return e;
}

std::optional<Vector> HomClasses::class_of(const Element& z) const {
  if (!z.typed()) return Vector(free_rank(), Scalar(0));
  auto zb = big_->coordinates(z);
  if (!zb) return std::nullopt;
  if (zs_.cols() == 0) {
    if (is_zero(*zb) || solve(boundary_, *zb)) return Vector{};
    return std::nullopt;
  }
  Matrix joint = Matrix::hstack(zs_, boundary_.scaled(-1));
  auto sol = solve(joint, *zb);
  if (!sol) return std::nullopt;
  Vector u(sol->begin(), sol->begin() + zs_.cols());
  return coord_.apply(u);
}

bool HomClasses::is_trivial(const Element& z) const {
  auto zb = big_->coordinates(z);
  if (!zb) return false;
  if (is_zero(*zb)) return true;
  return solve(boundary_, *zb).has_value();
}

// ---------------------------------------------------------------------------
// H^0

TruncationConfig enlarged(const CategoryPresentation& cat, const TruncationConfig& cfg) {
  TruncationConfig big = cfg;
  big.max_word_length = cat.kind == Kind::DG ? 2 * cfg.max_word_length : cfg.max_word_length + 2;
  return big;
}

H0Category::H0Category(const CategoryPresentation& cat, const TruncationConfig& cfg, const TruncationConfig& big)
    : cat_(cat), cfg_(cfg), big_(big) {
  int n = object_count();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto s = hom_complex(cat_, x, y, HomOptions{cfg_, std::make_pair(-1, 1)});
      auto b = hom_complex(cat_, x, y, HomOptions{big_, std::make_pair(-1, 1)});
      exact_ = exact_ && s->exact_flag;
      homs_[{x, y}] = std::make_shared<HomClasses>(s, b, 0);
    }
}

const HomClasses& H0Category::hom(int x, int y) const { return *homs_.at({x, y}); }

Element H0Category::element_of(int x, int y, const Vector& coords) const {
  const auto& h = hom(x, y);
  Element e = typed_zero(cat_.kind, cat_.ring, x, y, 0);
  for (size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) e = add(e, scale(h.representatives()[i], coords[i]));
  return e;
}

std::optional<Vector> H0Category::compose(int x, int y, int z, const Vector& a, const Vector& b) const {
  Element ea = element_of(x, y, a), eb = element_of(y, z, b);
  return hom(x, z).class_of(m_k(cat_, 2, {eb, ea}));
}

std::optional<Vector> H0Category::inverse(int x, int y, const Element& g) const {
  const RingSpec& ring = cat_.ring;
  const auto& back = hom(y, x);
  const auto& bxx = hom(x, x).big();
  const auto& byy = hom(y, y).big();
  int m = back.free_rank();
  int nx0 = static_cast<int>(bxx.basis(0).size()), ny0 = static_cast<int>(byy.basis(0).size());
  int nxm = static_cast<int>(bxx.basis(-1).size()), nym = static_cast<int>(byy.basis(-1).size());
  Matrix sys(ring, nx0 + ny0, m + nxm + nym);
  for (int i = 0; i < m; ++i) {
    const auto& rep = back.representatives()[i];
    auto a = bxx.coordinates(m_k(cat_, 2, {rep, g}));
    auto b = byy.coordinates(m_k(cat_, 2, {g, rep}));
    if (!a || !b) throw WindowError("composite leaves the enlarged window");
    for (int r = 0; r < nx0; ++r)
      if ((*a)[r] != 0) sys.set(r, i, (*a)[r]);
    for (int r = 0; r < ny0; ++r)
      if ((*b)[r] != 0) sys.set(nx0 + r, i, (*b)[r]);
  }
  Matrix dx = bxx.result.d(-1), dy = byy.result.d(-1);
  for (int r = 0; r < nx0; ++r)
    for (const auto& e : dx.rows() > r ? dx.row(r) : Matrix::Row{}) sys.set(r, m + e.col, ring.neg(e.value));
  for (int r = 0; r < ny0; ++r)
    for (const auto& e : dy.rows() > r ? dy.row(r) : Matrix::Row{})
      sys.set(nx0 + r, m + nxm + e.col, ring.neg(e.value));
  auto ux = bxx.coordinates(unit_element(cat_.kind, ring, x));
  auto uy = byy.coordinates(unit_element(cat_.kind, ring, y));
  Vector rhs(nx0 + ny0, Scalar(0));
  for (int r = 0; r < nx0; ++r) rhs[r] = (*ux)[r];
  for (int r = 0; r < ny0; ++r) rhs[nx0 + r] = (*uy)[r];
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  return Vector(sol->begin(), sol->begin() + m);
}

H0Category h0(const CategoryPresentation& cat, const TruncationConfig& cfg) {
  return H0Category(cat, cfg, enlarged(cat, cfg));
}

// ---------------------------------------------------------------------------
// structure checks

namespace {

// All window monomials of the category grouped by (source, target).
std::vector<std::vector<std::vector<Monomial>>> all_windows(const CategoryPresentation& cat,
                                                           const std::vector<int>& w,
                                                           const TruncationConfig& cfg) {
  int n = static_cast<int>(cat.quiver.objects().size());
  std::vector<std::vector<std::vector<Monomial>>> out(n, std::vector<std::vector<Monomial>>(n));
  TruncationConfig leaves{cfg.max_word_length, cfg.max_arity};
  std::vector<int> ones(w.size(), 1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) out[x][y] = window_monomials(cat, ones, x, y, leaves);
  return out;
}

// Evaluate the Stasheff sum on a tuple of normal-form monomials. All
// operations m^k, k >= 2, are free grafts, so everything except m^1 stays at
// the level of single monomials.
std::map<Monomial, Scalar> stasheff_sum(const CategoryPresentation& cat, M1Engine& eng,
                                        const std::vector<Monomial>& tuple, const std::vector<int>& deg) {
  const RingSpec& ring = cat.ring;
  int n = static_cast<int>(tuple.size());
  std::map<Monomial, Scalar> acc;
  auto add = [&](const Monomial& m, const Scalar& c) {
    auto it = acc.find(m);
    if (it == acc.end()) {
      acc.emplace(m, c);
      return;
    }
    it->second = ring.add(it->second, c);
    if (it->second == 0) acc.erase(it);
  };
  if (n == 1) {
    const Element& d = eng.monomial(tuple[0]);
    for (const auto& [m, c] : d.terms)
      for (const auto& [m2, c2] : eng.monomial(m).terms) add(m2, ring.mul(c, c2));
    return acc;
  }
  std::vector<int> eps(n + 1, 0);
  for (int i = 0; i < n; ++i) eps[i + 1] = eps[i] + deg[i];
  Monomial g;
  // m^1 applied to m^n
  if (graft_monomial(n, tuple, g))
    for (const auto& [m, c] : eng.monomial(g).terms) add(m, c);
  std::vector<Monomial> args;
  for (int r = 0; r < n; ++r) {
    // m^n with m^1 in slot r
    int t = n - r - 1;
    Scalar sign = ring.sign(r + t + eps[r]);
    args = tuple;
    for (const auto& [m, c] : eng.monomial(tuple[r]).terms) {
      args[r] = m;
      if (graft_monomial(n, args, g)) add(g, ring.mul(sign, c));
    }
    // m^{n-s+1} with m^s in slots r..r+s-1
    for (int s = 2; s <= n - 1 && r + s <= n; ++s) {
      t = n - r - s;
      std::vector<Monomial> inner(tuple.begin() + r, tuple.begin() + r + s);
      Monomial in;
      if (!graft_monomial(s, inner, in)) continue;
      std::vector<Monomial> outer(tuple.begin(), tuple.begin() + r);
      outer.push_back(in);
      outer.insert(outer.end(), tuple.begin() + r + s, tuple.end());
      if (graft_monomial(n - s + 1, outer, g)) add(g, ring.sign(r + s * t + s * eps[r]));
    }
  }
  return acc;
}

}  // namespace

std::vector<std::string> stasheff_violations(const CategoryPresentation& cat, const TruncationConfig& cfg,
                                             bool parallel, long* tuples) {
  if (cat.kind != Kind::Ainf) throw AlgebraError("stasheff_violations needs an A-infinity category");
  auto w = generator_weights(cat);
  auto win = all_windows(cat, w, cfg);
  int nobj = static_cast<int>(cat.quiver.objects().size());
  // Flatten the first entries so that the outer loop can be split across threads.
  struct Head {
    int x, y;
    const Monomial* m;
  };
  std::vector<Head> heads;
  // window lists are sorted by leaf count, so the inner loop can stop early
  std::vector<std::vector<std::vector<int>>> lc(nobj, std::vector<std::vector<int>>(nobj));
  std::vector<std::vector<std::vector<int>>> dg(nobj, std::vector<std::vector<int>>(nobj));
  for (int x = 0; x < nobj; ++x)
    for (int y = 0; y < nobj; ++y)
      for (const auto& m : win[x][y]) {
        heads.push_back({x, y, &m});
        lc[x][y].push_back(leaf_count(m));
        dg[x][y].push_back(monomial_degree(cat.quiver, Kind::Ainf, m));
      }
  long count = 0;
  std::vector<std::vector<std::string>> found(heads.size());
  auto work = [&](size_t h, M1Engine& eng, long& local) {
    std::vector<Monomial> tuple{*heads[h].m};
    std::vector<int> degs{monomial_degree(cat.quiver, Kind::Ainf, tuple[0])};
    std::function<void(int, int)> rec = [&](int src, int leaves_used) {
      // tuple[0] is the leftmost entry; further entries are applied first
      auto s = stasheff_sum(cat, eng, tuple, degs);
      ++local;
      if (!s.empty() && found[h].size() < 3) {
        std::string t;
        for (const auto& m : tuple) t += (t.empty() ? "" : ", ") + monomial_to_string(cat.quiver, Kind::Ainf, m);
        std::string v;
        for (const auto& [m, c] : s) v += (v.empty() ? "" : " + ") + to_string(c) + "*" +
                                          monomial_to_string(cat.quiver, Kind::Ainf, m);
        found[h].push_back("Stasheff(" + t + ") = " + v);
      }
      if (static_cast<int>(tuple.size()) == cfg.max_arity) return;
      for (int z = 0; z < nobj; ++z) {
        const auto& list = win[z][src];
        for (size_t i = 0; i < list.size(); ++i) {
          int l = lc[z][src][i];
          if (leaves_used + l > cfg.max_word_length) break;
          tuple.push_back(list[i]);
          degs.push_back(dg[z][src][i]);
          rec(z, leaves_used + l);
          degs.pop_back();
          tuple.pop_back();
        }
      }
    };
    rec(heads[h].x, leaf_count(*heads[h].m));
  };
  if (parallel) {
#pragma omp parallel reduction(+ : count)
    {
      M1Engine eng(cat);
      long local = 0;
#pragma omp for schedule(dynamic)
      for (long h = 0; h < static_cast<long>(heads.size()); ++h) work(h, eng, local);
      count += local;
    }
  } else {
    M1Engine eng(cat);
    for (size_t h = 0; h < heads.size(); ++h) work(h, eng, count);
  }
  if (tuples) *tuples = count;
  std::vector<std::string> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  return out;
}

std::optional<Element> reduce_relations(const CategoryPresentation& cat, const Element& e,
                                       const TruncationConfig& cfg) {
  if (cat.relations.empty() || e.is_zero()) return e;
  TruncationConfig big = cfg;
  auto w = generator_weights(cat);
  for (const auto& [m, c] : e.terms) big.max_word_length = std::max(big.max_word_length, monomial_weight(w, m));
  try {
    auto h = hom_complex(cat, e.source, e.target, HomOptions{big, std::make_pair(e.degree, e.degree)});
    return h->reduce(e);
  } catch (const AlgebraError&) {
    return std::nullopt;
  }
}

CheckReport check_structure(const CategoryPresentation& cat, const TruncationConfig& cfg) {
  CheckReport rep;
  rep.id = "structure:" + cat.name;
  rep.ring = cat.ring.name();
  rep.max_word_length = cfg.max_word_length;
  rep.max_arity = cfg.max_arity;
  const auto& q = cat.quiver;
  auto& wit = rep.witnesses;
  try {
    validate_presentation(cat);
  } catch (const AlgebraError& e) {
    wit.push_back(e.what());
  }
  M1Engine eng(cat);
  auto reduce_rel = [&](const Element& e) { return reduce_relations(cat, e, cfg); };
  for (size_t g = 0; g < q.generators().size(); ++g) {
    Element dd = eng.apply(eng.apply(monomial_element(q, cat.kind, cat.ring, Monomial{static_cast<int>(g)})));
    auto red = reduce_rel(dd);
    if (!red || !red->is_zero())
      wit.push_back("d^2(" + q.generator(g).name + ") = " + element_to_string(q, red ? *red : dd));
  }
  for (const auto& r : cat.relations) {
    Element dr = eng.apply(r);
    auto red = reduce_rel(dr);
    if (!red || !red->is_zero()) wit.push_back("d(" + cat.show(r) + ") is not in the relation ideal");
  }
  if (cat.kind == Kind::Ainf) {
    auto w = generator_weights(cat);
    auto win = all_windows(cat, w, cfg);
    int n = static_cast<int>(q.objects().size());
    for (int x = 0; x < n; ++x) {
      Element u = unit_element(Kind::Ainf, cat.ring, x);
      if (!eng.apply(u).is_zero()) wit.push_back("m1(id@" + q.objects()[x] + ") != 0");
      for (int y = 0; y < n; ++y)
        for (const auto& m : win[x][y]) {
          Element a = monomial_element(q, Kind::Ainf, cat.ring, m);
          if (graft(q, 2, {unit_element(Kind::Ainf, cat.ring, y), a}) != a ||
              graft(q, 2, {a, unit_element(Kind::Ainf, cat.ring, x)}) != a)
            wit.push_back("unit law fails on " + cat.show(a));
          if (x == y && !graft(q, 3, {a, u, a}).is_zero()) wit.push_back("m3 with a unit entry is nonzero");
        }
    }
    auto v = stasheff_violations(cat, cfg, true);
    for (size_t i = 0; i < v.size() && i < 10; ++i) wit.push_back(v[i]);
  }
  rep.status = wit.empty() ? Status::Pass : Status::Fail;
  return rep;
}

bool split_unit_check(const CategoryPresentation& cat, int x, const TruncationConfig& cfg) {
  auto h = hom_complex(cat, x, x, HomOptions{cfg, std::make_pair(-1, 0)});
  auto u = h->coordinates(unit_element(cat.kind, cat.ring, x));
  if (!u || is_zero(*u)) return false;
  int n0 = static_cast<int>(u->size());
  Matrix dm = h->result.d(-1);
  int nb = dm.rows() == n0 ? dm.cols() : 0;
  // p^T d = 0 and p^T u = 1, solved for p
  Matrix sys(cat.ring, nb + 1, n0);
  if (nb > 0) {
    Matrix t = dm.transpose();
    for (int r = 0; r < nb; ++r) sys.set_row(r, t.row(r));
  }
  for (int j = 0; j < n0; ++j)
    if ((*u)[j] != 0) sys.set(nb, j, (*u)[j]);
  Vector rhs(nb + 1, Scalar(0));
  rhs[nb] = 1;
  return solve(sys, rhs).has_value();
}

}  // namespace ainf
