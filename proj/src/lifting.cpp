#include "ainf/lifting.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace ainf {

// ---------------------------------------------------------------------------
// generating maps

std::string GeneratingMap::name() const {
  switch (tag) {
    case Tag::Q:
      return "Q";
    case Tag::S:
      return "S(" + std::to_string(n) + ")";
    case Tag::R:
      return "R(" + std::to_string(n) + ")";
    case Tag::F_dg:
      return "F_dg";
    case Tag::F_prime:
      return "F_prime";
    case Tag::J_disk:
      return "J_disk(" + std::to_string(n) + ")";
  }
  return "?";
}

GeneratingMap GeneratingMap::parse(const std::string& text) {
  static const std::regex family("(S|R|J_disk)\\((-?[0-9]+)\\)");
  std::smatch m;
  GeneratingMap g;
  if (text == "Q") return g;
  if (text == "F_dg" || text == "F") {
    g.tag = Tag::F_dg;
    return g;
  }
  if (text == "F_prime" || text == "F'") {
    g.tag = Tag::F_prime;
    return g;
  }
  if (std::regex_match(text, m, family)) {
    g.tag = m[1] == "S" ? Tag::S : m[1] == "R" ? Tag::R : Tag::J_disk;
    g.n = std::stoi(m[2]);
    return g;
  }
  throw ParseError("unknown generating map: " + text);
}

StrictFunctor generating_functor(const GeneratingMap& g, const RingSpec& ring) {
  if (g.tag == GeneratingMap::Tag::J_disk) throw AlgebraError("J_disk(n) is a chain map, not a functor");
  return catalog_functor(g.name(), ring);
}

std::vector<int> probe_degrees() { return {-1, 0, 1, 2}; }

// ---------------------------------------------------------------------------
// helpers

namespace {

int element_weight(const std::vector<int>& w, const Element& e) {
  int top = 0;
  for (const auto& [m, c] : e.terms) top = std::max(top, monomial_weight(w, m));
  return top;
}

int element_arity(const Element& e) {
  int top = 0;
  for (const auto& [m, c] : e.terms) top = std::max(top, max_node_arity(m));
  return top;
}

// Coordinates of elements of cat(x, y)^k in one window holding all their terms.
std::vector<Vector> common_coordinates(const CategoryPresentation& cat, int x, int y, int k,
                                       const std::vector<Element>& es, int arity) {
  auto w = generator_weights(cat);
  TruncationConfig cfg{1, arity};
  for (const auto& e : es) {
    cfg.max_word_length = std::max(cfg.max_word_length, element_weight(w, e));
    cfg.max_arity = std::max(cfg.max_arity, element_arity(e));
  }
  auto h = hom_complex(cat, x, y, HomOptions{cfg, std::make_pair(k, k)});
  std::vector<Vector> out;
  for (const auto& e : es) {
    Element t = e;
    if (!t.typed()) t = typed_zero(cat.kind, cat.ring, x, y, k);
    auto c = h->coordinates(t);
    if (!c) throw WindowError("element outside its own window: " + cat.show(t));
    out.push_back(*c);
  }
  return out;
}

Element basis_element(const CategoryPresentation& cat, int x, int y, int k, const Monomial& m) {
  Element e = typed_zero(cat.kind, cat.ring, x, y, k);
  add_term(e, m, Scalar(1));
  return e;
}

Vector combine(const RingSpec& ring, const Vector& base, const std::vector<Vector>& dirs, const Vector& coeffs) {
  Vector v = base;
  for (size_t i = 0; i < dirs.size(); ++i)
    if (coeffs[i] != 0)
      for (size_t j = 0; j < v.size(); ++j) v[j] = ring.add(v[j], ring.mul(coeffs[i], dirs[i][j]));
  return v;
}

// Points base + span(dirs) over F_p, or false once more than `limit`.
bool affine_points(const RingSpec& ring, const Vector& base, const std::vector<Vector>& dirs, long limit,
                   std::vector<Vector>& out) {
  if (ring.kind() != RingSpec::Kind::PrimeField) throw AlgebraError("enumeration needs a finite field");
  long p = ring.characteristic(), count = 1;
  for (size_t i = 0; i < dirs.size(); ++i) {
    count *= p;
    if (count > limit) return false;
  }
  for (long c = 0; c < count; ++c) {
    Vector coeffs(dirs.size());
    long t = c;
    for (auto& x : coeffs) {
      x = Scalar(t % p);
      t /= p;
    }
    out.push_back(combine(ring, base, dirs, coeffs));
  }
  return true;
}

Verdict conj(Verdict a, const Verdict& b) {
  a.value = a.value && b.value;
  a.exact = a.exact && b.exact;
  a.witnesses.insert(a.witnesses.end(), b.witnesses.begin(), b.witnesses.end());
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// characterisations

Verdict sphere_disk_lifting(const StrictFunctor& f, int n, const TruncationConfig& cfg) {
  Verdict v;
  v.value = true;
  const auto& C = f.source;
  const auto& D = f.target;
  TruncationConfig big = enlarged(C, cfg);
  int arity = image_config(f, big).max_arity;
  int objs = static_cast<int>(C.quiver.objects().size());
  for (int x = 0; x < objs && v.value; ++x)
    for (int y = 0; y < objs && v.value; ++y) {
      int fx = f.object_map[x], fy = f.object_map[y];
      auto ss = hom_complex(C, x, y, cfg);
      auto sb = hom_complex(C, x, y, big);
      auto tt = hom_complex(D, fx, fy, cfg);
      v.exact = v.exact && ss->exact_flag && tt->exact_flag;
      std::vector<Element> zs, bs, es;
      if (!ss->basis(n).empty())
        for (const auto& z : kernel_basis(ss->result.d(n))) zs.push_back(ss->element_of(n, z));
      for (const auto& m : tt->basis(n - 1)) bs.push_back(basis_element(D, fx, fy, n - 1, m));
      for (const auto& m : sb->basis(n - 1)) es.push_back(basis_element(C, x, y, n - 1, m));
      // pairs (z, b) with F(z) = d(b)
      std::vector<Element> top;
      for (const auto& z : zs) top.push_back(f.apply(z));
      for (const auto& b : bs) top.push_back(scale(m1_expand(D, b), Scalar(-1)));
      auto pc = common_coordinates(D, fx, fy, n, top, arity);
      int rows = pc.empty() ? 0 : static_cast<int>(pc[0].size());
      auto pairs = kernel_basis(columns_matrix(f.ring(), rows, pc));
      if (pairs.empty()) continue;
      // e -> (d e, F e) against (z, b)
      std::vector<Element> cn, dn;
      for (const auto& e : es) cn.push_back(m1_expand(C, e));
      for (const auto& z : zs) cn.push_back(z);
      for (const auto& e : es) dn.push_back(f.apply(e));
      for (const auto& b : bs) dn.push_back(b);
      cn.push_back(typed_zero(C.kind, C.ring, x, y, n));  // fixes the row count
      dn.push_back(typed_zero(D.kind, D.ring, fx, fy, n - 1));
      auto cc = common_coordinates(C, x, y, n, cn, arity);
      auto dc = common_coordinates(D, fx, fy, n - 1, dn, arity);
      int ne = static_cast<int>(es.size()), nz = static_cast<int>(zs.size());
      int rc = static_cast<int>(cc[0].size()), rd = static_cast<int>(dc[0].size());
      std::vector<Vector> acols;
      for (int l = 0; l < ne; ++l) {
        Vector col = cc[l];
        col.insert(col.end(), dc[l].begin(), dc[l].end());
        acols.push_back(col);
      }
      Matrix a = columns_matrix(f.ring(), rc + rd, acols);
      for (const auto& p : pairs) {
        Vector rhs(rc + rd, Scalar(0));
        Element z = typed_zero(C.kind, C.ring, x, y, n), b = typed_zero(D.kind, D.ring, fx, fy, n - 1);
        for (int i = 0; i < nz; ++i)
          if (p[i] != 0) {
            z = add(z, scale(zs[i], p[i]));
            for (int r = 0; r < rc; ++r) rhs[r] = f.ring().add(rhs[r], f.ring().mul(p[i], cc[ne + i][r]));
          }
        for (size_t j = 0; j < bs.size(); ++j)
          if (p[nz + j] != 0) {
            b = add(b, scale(bs[j], p[nz + j]));
            for (int r = 0; r < rd; ++r)
              rhs[rc + r] = f.ring().add(rhs[rc + r], f.ring().mul(p[nz + j], dc[ne + j][r]));
          }
        if (!solve(a, rhs)) {
          v.value = false;
          v.witnesses.push_back("cycle z = " + C.show(z) + " with F(z) = d(" + D.show(b) +
                                ") has no e with d(e) = z and F(e) = b");
          break;
        }
      }
    }
  return v;
}

Verdict has_rlp(const StrictFunctor& f, const GeneratingMap& g, const TruncationConfig& cfg) {
  using Tag = GeneratingMap::Tag;
  switch (g.tag) {
    case Tag::Q:
      return is_surjective_on_objects(f);
    case Tag::R:
    case Tag::J_disk:
      return is_surjective_on_morphisms(f, cfg, g.n - 1);
    case Tag::S:
      return sphere_disk_lifting(f, g.n, cfg);
    case Tag::F_dg:
    case Tag::F_prime:
      return is_isofibration(f, cfg);
  }
  return {};
}

// ---------------------------------------------------------------------------
// functor search

namespace {

// Enumerates strict functors src -> tgt extending fixed data. Degree-0
// generators not fixed are enumerated over their window (or over preimages
// under `over`); every other generator image solves one linear system.
struct FunctorSearch {
  const CategoryPresentation* src = nullptr;
  const CategoryPresentation* tgt = nullptr;
  std::vector<int> objects;  // -1: free
  std::map<int, Element> fixed;
  const StrictFunctor* over = nullptr;  // required over(L(y)) = over_images[y]
  std::vector<int> over_objects;
  std::map<int, Element> over_images;
  TruncationConfig cfg;
  bool all_points = true;
  long budget = 0;
  long used = 0;
  bool exhausted = false;
  std::function<bool(const StrictFunctor&)> visit;

  bool spend() {
    if (used >= budget) {
      exhausted = true;
      return false;
    }
    ++used;
    return true;
  }

  // returns false to stop
  bool run() {
    if (!src->relations.empty()) throw AlgebraError("functor search needs a free source");
    std::vector<int> objs = objects;
    objs.resize(src->quiver.objects().size(), -1);
    return assign_objects(objs, 0);
  }

  bool assign_objects(std::vector<int>& objs, size_t i) {
    if (i == objs.size()) return solve_generators(objs);
    if (objs[i] >= 0) return assign_objects(objs, i + 1);
    int nt = static_cast<int>(tgt->quiver.objects().size());
    for (int o = 0; o < nt; ++o) {
      if (over && i < over_objects.size() && over_objects[i] >= 0 && over->object_map[o] != over_objects[i]) continue;
      objs[i] = o;
      bool go = assign_objects(objs, i + 1);
      objs[i] = -1;
      if (!go) return false;
    }
    return true;
  }

  TruncationConfig window_for(const std::vector<int>& w, int gen) const {
    TruncationConfig c = cfg;
    c.max_word_length = cfg.max_word_length * std::max(1, w[gen]);
    return c;
  }

  bool solve_generators(const std::vector<int>& objs) {
    const auto& gens = src->quiver.generators();
    int ng = static_cast<int>(gens.size());
    auto w = generator_weights(*src);
    StrictFunctor L;
    L.name = "lift";
    L.source = *src;
    L.target = *tgt;
    L.object_map = objs;
    std::vector<int> enumerated, linear;
    for (int g = 0; g < ng; ++g) {
      if (fixed.count(g))
        L.generator_map[g] = fixed.at(g);
      else if (gens[g].degree == 0)
        enumerated.push_back(g);
      else
        linear.push_back(g);
    }
    std::set<int> lin(linear.begin(), linear.end());
    for (int g = 0; g < ng; ++g)
      for (const auto& [m, c] : src->d_of(g).terms) {
        int hits = 0;
        for (int leaf : leaves(m)) hits += lin.count(leaf);
        if (hits > 1) throw AlgebraError("lifting constraints are not linear for " + gens[g].name);
      }

    // candidate images of the enumerated generators
    std::vector<std::vector<Element>> choices;
    for (int g : enumerated) {
      int s = objs[gens[g].source], t = objs[gens[g].target];
      auto h = hom_complex(*tgt, s, t, HomOptions{window_for(w, g), std::make_pair(0, 0)});
      const auto& basis = h->basis(0);
      int dim = static_cast<int>(basis.size());
      Vector base(dim, Scalar(0));
      std::vector<Vector> dirs;
      if (over) {
        int fs = over->object_map[s], ft = over->object_map[t];
        std::vector<Element> ims;
        for (const auto& m : basis) ims.push_back(over->apply(basis_element(*tgt, s, t, 0, m)));
        ims.push_back(over_images.at(g));
        auto co = common_coordinates(over->target, fs, ft, 0, ims, cfg.max_arity);
        Vector want = co.back();
        co.pop_back();
        Matrix m = columns_matrix(tgt->ring, static_cast<int>(want.size()), co);
        auto sol = solve(m, want);
        if (!sol) return true;  // no candidate: nothing to visit
        base = *sol;
        dirs = kernel_basis(m);
      } else {
        for (int j = 0; j < dim; ++j) {
          Vector e(dim, Scalar(0));
          e[j] = Scalar(1);
          dirs.push_back(e);
        }
      }
      std::vector<Vector> pts;
      if (!affine_points(tgt->ring, base, dirs, budget, pts)) {
        exhausted = true;
        return false;
      }
      std::vector<Element> opts;
      for (const auto& p : pts) opts.push_back(h->element_of(0, p));
      choices.push_back(std::move(opts));
    }

    std::vector<size_t> idx(enumerated.size(), 0);
    while (true) {
      if (!spend()) return false;
      for (size_t i = 0; i < enumerated.size(); ++i) L.generator_map[enumerated[i]] = choices[i][idx[i]];
      if (!solve_linear(L, linear, w)) return false;
      size_t i = 0;
      while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    return true;
  }

  bool solve_linear(StrictFunctor& L, const std::vector<int>& linear, const std::vector<int>& w) {
    const auto& gens = src->quiver.generators();
    int ng = static_cast<int>(gens.size());
    const auto& ring = tgt->ring;
    // unknown columns
    struct Col {
      int gen;
      Element value;
    };
    std::vector<Col> cols;
    std::vector<std::shared_ptr<const HomTruncation>> windows;
    for (int g : linear) {
      int s = L.object_map[gens[g].source], t = L.object_map[gens[g].target];
      auto h = hom_complex(*tgt, s, t, HomOptions{window_for(w, g), std::make_pair(gens[g].degree, gens[g].degree)});
      windows.push_back(h);
      for (const auto& m : h->basis(gens[g].degree))
        cols.push_back({g, basis_element(*tgt, s, t, gens[g].degree, m)});
      L.generator_map.erase(g);
    }
    int nc = static_cast<int>(cols.size());
    std::vector<Vector> blocks_cols(nc);  // column entries, block by block
    Vector rhs;
    auto append_block = [&](const std::vector<Element>& colvals, const Element& target, int x, int y, int k,
                            const CategoryPresentation& cat) {
      std::vector<Element> es = colvals;
      es.push_back(target);
      auto co = common_coordinates(cat, x, y, k, es, cfg.max_arity);
      for (int j = 0; j < nc; ++j) blocks_cols[j].insert(blocks_cols[j].end(), co[j].begin(), co[j].end());
      rhs.insert(rhs.end(), co[nc].begin(), co[nc].end());
    };
    for (int g = 0; g < ng; ++g) {
      int s = L.object_map[gens[g].source], t = L.object_map[gens[g].target];
      int k = gens[g].degree + 1;
      Element dg = src->d_of(g);
      bool unknown = std::find(linear.begin(), linear.end(), g) != linear.end();
      // m1(L g) - L(d g) = 0; constant part with all unknowns zero
      Element base = L.apply(dg);
      Element cst = unknown ? base : sub(base, m1_expand(*tgt, L.image_of_generator(g)));
      std::set<int> mentioned;
      for (const auto& [m, c] : dg.terms)
        for (int leaf : leaves(m)) mentioned.insert(leaf);
      std::vector<Element> colvals;
      for (const auto& col : cols) {
        Element v = typed_zero(tgt->kind, ring, s, t, k);
        if (col.gen == g) v = m1_expand(*tgt, col.value);
        if (mentioned.count(col.gen)) {
          L.generator_map[col.gen] = col.value;
          v = sub(v, sub(L.apply(dg), base));
          L.generator_map.erase(col.gen);
        }
        colvals.push_back(v);
      }
      append_block(colvals, cst, s, t, k, *tgt);
    }
    if (over)
      for (int g : linear) {
        int s = L.object_map[gens[g].source], t = L.object_map[gens[g].target];
        std::vector<Element> colvals;
        for (const auto& col : cols)
          colvals.push_back(col.gen == g ? over->apply(col.value)
                                         : typed_zero(over->target.kind, ring, over->object_map[s],
                                                      over->object_map[t], gens[g].degree));
        append_block(colvals, over_images.at(g), over->object_map[s], over->object_map[t], gens[g].degree,
                     over->target);
      }
    int rows = static_cast<int>(rhs.size());
    std::vector<Vector> pts;
    if (nc == 0) {
      if (!is_zero(rhs)) return true;
      pts.push_back({});
    } else {
      Matrix a = columns_matrix(ring, rows, blocks_cols);
      auto sol = solve(a, rhs);
      if (!sol) return true;
      if (!all_points)
        pts.push_back(*sol);
      else if (!affine_points(ring, *sol, kernel_basis(a), budget, pts)) {
        exhausted = true;
        return false;
      }
    }
    for (const auto& p : pts) {
      if (!pts.empty() && &p != &pts.front() && !spend()) return false;
      StrictFunctor out = L;
      for (int j = 0; j < nc; ++j)
        if (p[j] != 0) {
          auto& img = out.generator_map[cols[j].gen];
          img = img.typed() ? add(img, scale(cols[j].value, p[j])) : scale(cols[j].value, p[j]);
        }
      for (int g : linear)
        if (!out.generator_map.count(g)) {
          int s = L.object_map[gens[g].source], t = L.object_map[gens[g].target];
          out.generator_map[g] = typed_zero(tgt->kind, ring, s, t, gens[g].degree);
        }
      if (!visit(out)) return false;
    }
    return true;
  }
};

// The left map sends generators to generators; returns the image id.
int generator_image(const StrictFunctor& left, int x) {
  Element e = left.image_of_generator(x);
  if (e.terms.size() != 1 || e.terms.begin()->second != 1 || e.terms.begin()->first.size() != 1 ||
      e.terms.begin()->first[0] < 0)
    throw AlgebraError("left map must send generators to generators");
  return e.terms.begin()->first[0];
}

}  // namespace

LiftingSquare make_square(const GeneratingMap& g, const StrictFunctor& top, const StrictFunctor& bottom,
                          const StrictFunctor& right) {
  return {generating_functor(g, right.ring()), top, bottom, right};
}

CheckReport check_square(const LiftingSquare& sq, const TruncationConfig& cfg) {
  CheckReport rep;
  rep.id = "square:" + sq.left.name + "/" + sq.right.name;
  rep.ring = sq.right.ring().name();
  rep.max_word_length = cfg.max_word_length;
  rep.max_arity = cfg.max_arity;
  for (size_t x = 0; x < sq.left.object_map.size(); ++x)
    if (sq.right.object_map[sq.top.object_map[x]] != sq.bottom.object_map[sq.left.object_map[x]])
      rep.witnesses.push_back("object " + sq.left.source.quiver.objects()[x] + " does not commute");
  for (size_t i = 0; i < sq.left.source.quiver.generators().size(); ++i) {
    int x = static_cast<int>(i);
    Element a = sq.right.apply(sq.top.image_of_generator(x));
    Element b = sq.bottom.apply(sq.left.image_of_generator(x));
    if (!equal_in(sq.right.target, a, b, cfg))
      rep.witnesses.push_back("generator " + sq.left.source.quiver.generator(x).name + " does not commute");
  }
  rep.status = rep.witnesses.empty() ? Status::Pass : Status::Fail;
  return rep;
}

std::string outcome_name(LiftResult::Outcome o) {
  switch (o) {
    case LiftResult::Outcome::Found:
      return "found";
    case LiftResult::Outcome::NoneFound:
      return "none found";
    case LiftResult::Outcome::BudgetExhausted:
      return "budget exhausted";
  }
  return "?";
}

LiftResult brute_force_lift(const LiftingSquare& sq, long budget, const TruncationConfig& cfg) {
  const auto& left = sq.left;
  const auto& C = sq.right.source;
  TruncationConfig big = enlarged(C, cfg);
  FunctorSearch s;
  s.src = &left.target;
  s.tgt = &C;
  s.objects.assign(left.target.quiver.objects().size(), -1);
  for (size_t x = 0; x < left.object_map.size(); ++x) s.objects[left.object_map[x]] = sq.top.object_map[x];
  for (size_t i = 0; i < left.source.quiver.generators().size(); ++i) {
    int x = static_cast<int>(i);
    s.fixed[generator_image(left, x)] = sq.top.image_of_generator(x);
  }
  s.over = &sq.right;
  s.over_objects = sq.bottom.object_map;
  for (size_t i = 0; i < left.target.quiver.generators().size(); ++i)
    s.over_images[static_cast<int>(i)] = sq.bottom.image_of_generator(static_cast<int>(i));
  s.cfg = big;
  s.all_points = false;
  s.budget = budget;
  LiftResult res;
  s.visit = [&](const StrictFunctor& lift) {
    if (check_functor(lift, big).status != Status::Pass) return true;
    for (size_t x = 0; x < left.object_map.size(); ++x)
      if (lift.object_map[left.object_map[x]] != sq.top.object_map[x]) return true;
    for (size_t i = 0; i < left.source.quiver.generators().size(); ++i) {
      int x = static_cast<int>(i);
      if (!equal_in(C, lift.apply(left.image_of_generator(x)), sq.top.image_of_generator(x), big)) return true;
    }
    for (size_t y = 0; y < lift.object_map.size(); ++y)
      if (sq.right.object_map[lift.object_map[y]] != sq.bottom.object_map[y]) return true;
    for (size_t i = 0; i < left.target.quiver.generators().size(); ++i) {
      int y = static_cast<int>(i);
      if (!equal_in(sq.right.target, sq.right.apply(lift.image_of_generator(y)), sq.bottom.image_of_generator(y),
                    big))
        return true;
    }
    res.outcome = LiftResult::Outcome::Found;
    res.lift = lift;
    res.lift->name = "lift";
    return false;
  };
  s.run();
  res.explored = s.used;
  if (!res.lift) res.outcome = s.exhausted ? LiftResult::Outcome::BudgetExhausted : LiftResult::Outcome::NoneFound;
  return res;
}

bool enumerate_squares(const GeneratingMap& g, const StrictFunctor& right, const TruncationConfig& cfg, long budget,
                       const std::function<bool(const LiftingSquare&)>& visit) {
  StrictFunctor left = generating_functor(g, right.ring());
  const auto& C = right.source;
  const auto& D = right.target;
  long produced = 0;
  bool complete = true;
  FunctorSearch tops;
  tops.src = &left.source;
  tops.tgt = &C;
  tops.cfg = cfg;
  tops.budget = budget;
  tops.visit = [&](const StrictFunctor& top) {
    FunctorSearch bottoms;
    bottoms.src = &left.target;
    bottoms.tgt = &D;
    bottoms.objects.assign(left.target.quiver.objects().size(), -1);
    for (size_t x = 0; x < left.object_map.size(); ++x)
      bottoms.objects[left.object_map[x]] = right.object_map[top.object_map[x]];
    for (size_t i = 0; i < left.source.quiver.generators().size(); ++i) {
      int x = static_cast<int>(i);
      bottoms.fixed[generator_image(left, x)] = right.apply(top.image_of_generator(x));
    }
    bottoms.cfg = cfg;
    bottoms.budget = budget;
    bool go = true;
    bottoms.visit = [&](const StrictFunctor& bottom) {
      if (produced >= budget) {
        complete = false;
        return go = false;
      }
      ++produced;
      StrictFunctor t = top, b = bottom;
      t.name = "top";
      b.name = "bottom";
      go = visit(LiftingSquare{left, t, b, right});
      return go;
    };
    bottoms.run();
    if (bottoms.exhausted) complete = false;
    return go && complete;
  };
  tops.run();
  if (tops.exhausted) complete = false;
  return complete;
}

OracleResult oracle_rlp(const StrictFunctor& right, const GeneratingMap& g, long budget,
                        const TruncationConfig& cfg) {
  OracleResult res;
  bool exhausted = false;
  bool complete = enumerate_squares(g, right, cfg, budget, [&](const LiftingSquare& sq) {
    ++res.squares;
    auto lift = brute_force_lift(sq, budget, cfg);
    if (lift.outcome == LiftResult::Outcome::NoneFound) {
      res.outcome = LiftResult::Outcome::NoneFound;
      res.counterexample = sq;
      return false;
    }
    if (lift.outcome == LiftResult::Outcome::BudgetExhausted) exhausted = true;
    return true;
  });
  if (res.outcome != LiftResult::Outcome::NoneFound && (exhausted || !complete))
    res.outcome = LiftResult::Outcome::BudgetExhausted;
  return res;
}

// ---------------------------------------------------------------------------
// classification

TruncationConfig classification_config(const StrictFunctor& f, const TruncationConfig& cfg) {
  TruncationConfig c = cfg;
  if (f.source.kind == Kind::Ainf || f.target.kind == Kind::Ainf) c.max_word_length = std::min(c.max_word_length, 4);
  return c;
}

Classification classify(const StrictFunctor& f, const TruncationConfig& cfg) {
  TruncationConfig c = classification_config(f, cfg);
  Verdict surj = is_surjective_on_morphisms(f, c);
  Verdict iso = is_isofibration(f, c);
  Verdict qe = is_quasi_equivalence(f, c);
  Verdict obj = is_surjective_on_objects(f);
  return {conj(iso, surj), conj(conj(obj, surj), qe), qe};
}

std::vector<SweepCell> oracle_sweep(const std::vector<StrictFunctor>& functors, const std::vector<GeneratingMap>& maps,
                                    long budget, const TruncationConfig& rlp_cfg, const TruncationConfig& oracle_cfg,
                                    bool parallel) {
  int nf = static_cast<int>(functors.size()), nm = static_cast<int>(maps.size());
  std::vector<SweepCell> cells(static_cast<size_t>(nf) * nm);
  auto run = [&](int i) {
    const auto& f = functors[i / nm];
    const auto& g = maps[i % nm];
    SweepCell& c = cells[i];
    c.functor = f.name;
    c.map = g.name();
    c.characterization = has_rlp(f, g, classification_config(f, rlp_cfg)).value;
    c.oracle = oracle_rlp(f, g, budget, oracle_cfg);
  };
  int total = nf * nm;
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) run(i);
  } else {
    for (int i = 0; i < total; ++i) run(i);
  }
  return cells;
}

std::vector<Classification> classify_all(const std::vector<StrictFunctor>& functors, const TruncationConfig& cfg,
                                         bool parallel) {
  int n = static_cast<int>(functors.size());
  std::vector<Classification> out(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) out[i] = classify(functors[i], cfg);
  } else {
    for (int i = 0; i < n; ++i) out[i] = classify(functors[i], cfg);
  }
  return out;
}

}  // namespace ainf
