#include "ainf/pushout.hpp"

#include <algorithm>
#include <sstream>

namespace ainf {

namespace {

using Tag = GeneratingMap::Tag;

std::string fresh(const std::string& label, const std::function<bool(const std::string&)>& taken) {
  std::string s = label;
  while (taken(s)) s += "'";
  return s;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

// Drop the unit basis vector of degree 0 (the quotient by R * 1).
FiniteComplex without_unit(const HomTruncation& h) {
  const auto& c = h.result;
  int unit = -1;
  const auto& b0 = h.basis(0);
  for (size_t i = 0; i < b0.size(); ++i)
    if (is_unit(b0[i])) unit = static_cast<int>(i);
  if (unit < 0) return c;
  std::map<int, std::vector<std::string>> basis = c.basis();
  basis[0].erase(basis[0].begin() + unit);
  std::map<int, Matrix> diff;
  for (int k : c.degrees()) {
    Matrix d = c.d(k);
    std::vector<int> rows, cols;
    for (int r = 0; r < d.rows(); ++r)
      if (!(k + 1 == 0 && r == unit)) rows.push_back(r);
    for (int j = 0; j < d.cols(); ++j)
      if (!(k == 0 && j == unit)) cols.push_back(j);
    diff[k] = d.select_rows(rows).select_columns(cols);
  }
  if (basis[0].empty()) basis.erase(0);
  return FiniteComplex(c.ring(), basis, diff);
}

// Right-nested tensor product of the factors.
FiniteComplex tensor_all(const std::vector<FiniteComplex>& fs) {
  FiniteComplex out = fs.back();
  for (int i = static_cast<int>(fs.size()) - 2; i >= 0; --i) out = tensor(fs[i], out);
  return out;
}

FiniteComplex direct_sum(const RingSpec& ring, const std::vector<FiniteComplex>& cs) {
  std::map<int, std::vector<std::string>> basis;
  std::map<int, Matrix> diff;
  std::set<int> degs;
  for (size_t i = 0; i < cs.size(); ++i)
    for (int k : cs[i].degrees()) {
      degs.insert(k);
      for (const auto& l : cs[i].labels(k)) basis[k].push_back(std::to_string(i) + ":" + l);
    }
  for (int k : degs) {
    Matrix m(ring, 0, 0);
    bool first = true;
    for (const auto& c : cs) {
      Matrix d = c.d(k);
      m = first ? d : Matrix::direct_sum(m, d);
      first = false;
    }
    diff[k] = m;
  }
  return FiniteComplex(ring, basis, diff);
}

struct Factors {
  std::vector<FiniteComplex> fs;
  int cell_index = -1;  // position of the first cell factor
  bool approximate = false;
};

// Factors of layer m >= 1, outermost (last applied) first.
Factors layer_factors(const GluedCategory& g, int x, int y, int m, const TruncationConfig& cfg,
                      const TruncationConfig& cell_cfg) {
  Factors out;
  const auto& base = g.base;
  auto hom = [&](int a, int b) {
    auto h = hom_complex(base, a, b, cfg);
    if (!h->exact_flag) out.approximate = true;
    return h->result;
  };
  FiniteComplex cell;
  int in = 0, outo = 0;  // base objects where the cell factor starts and ends
  if (g.cell.tag == Tag::R) {
    in = g.top.object_map[0];
    outo = g.top.object_map[1];
    cell = disk(g.cell.n, base.ring);
  } else {
    in = outo = g.top.object_map[0];
    const auto& ycat = g.corner.source;
    int one = ycat.quiver.object_index("1");
    auto h = hom_complex(ycat, one, one, cell_cfg);
    if (!h->exact_flag) out.approximate = true;
    cell = without_unit(*h);
  }
  out.fs.push_back(hom(outo, y));
  for (int i = 0; i < m; ++i) {
    if (i > 0) out.fs.push_back(hom(outo, in));
    if (out.cell_index < 0) out.cell_index = static_cast<int>(out.fs.size());
    out.fs.push_back(cell);
  }
  out.fs.push_back(hom(x, in));
  return out;
}

void check_layered(const GluedCategory& g) {
  if (g.cell.tag == Tag::S || g.cell.tag == Tag::J_disk)
    throw AlgebraError("layered homs are defined for Q, R(n), F_dg and F_prime cells");
}

int count_cell_leaves(const GluedCategory& g, const Monomial& m) {
  int c = 0;
  for (int leaf : leaves(m)) c += g.cell_generators.count(leaf);
  return c;
}

// Persistent homology rank in degree k: small cycles modulo big boundaries,
// matched by basis label.
int persistent_rank(const FiniteComplex& small, const FiniteComplex& big, int k) {
  const auto& ring = small.ring();
  auto zs = kernel_basis(small.d(k));
  if (zs.empty()) return 0;
  std::map<std::string, int> pos;
  const auto& bl = big.labels(k);
  for (size_t i = 0; i < bl.size(); ++i) pos[bl[i]] = static_cast<int>(i);
  std::vector<Vector> cols;
  const auto& sl = small.labels(k);
  for (const auto& z : zs) {
    Vector v(bl.size(), Scalar(0));
    for (size_t i = 0; i < z.size(); ++i)
      if (z[i] != 0) {
        auto it = pos.find(sl[i]);
        if (it == pos.end()) throw WindowError("small window is not contained in the big one");
        v[it->second] = z[i];
      }
    cols.push_back(v);
  }
  return image_rank_in_homology(columns_matrix(ring, static_cast<int>(bl.size()), cols), big.d(k - 1));
}

std::map<int, ModuleDescription> nonzero_homology(const FiniteComplex& c) {
  auto h = homology_all(c);
  std::erase_if(h, [](const auto& p) { return p.second.is_zero(); });
  return h;
}

std::string degree_list(const std::map<int, int>& ranks) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, r] : ranks) {
    os << (first ? "" : ", ") << "H^" << k << " rank " << r;
    first = false;
  }
  return os.str();
}

}  // namespace

StrictFunctor parse_attachment(const GeneratingMap& cell, const CategoryPresentation& base, const std::string& text) {
  StrictFunctor left = generating_functor(cell, base.ring);
  const auto& x = left.source;
  StrictFunctor top;
  top.name = "attach";
  top.source = x;
  top.target = base;
  top.object_map.assign(x.quiver.objects().size(), -1);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("attachment entry needs label=value: " + item);
    std::string key = trim(item.substr(0, eq)), value = trim(item.substr(eq + 1));
    int obj = x.quiver.object_index(key);
    int nobj = static_cast<int>(x.quiver.objects().size());
    if (obj < 0 && key == "z" && nobj == 1) obj = 0;
    if (obj < 0 && (key == "x" || key == "y") && nobj == 2) obj = key == "x" ? 0 : 1;
    if (obj >= 0) {
      int b = base.quiver.object_index(value);
      if (b < 0) throw ParseError("unknown base object " + value);
      top.object_map[obj] = b;
      continue;
    }
    int gen = x.quiver.generator_index(key);
    if (gen < 0) throw ParseError("unknown attachment label " + key);
    top.generator_map[gen] = base.parse(value);
  }
  for (int o : top.object_map)
    if (o < 0) throw ParseError("attachment leaves an object of " + x.name + " unassigned");
  return top;
}

GluedCategory pushout(const CategoryPresentation& base, const GeneratingMap& cell, const std::string& attachment) {
  return pushout(base, cell, parse_attachment(cell, base, attachment));
}

GluedCategory pushout(const CategoryPresentation& base, const GeneratingMap& cell, const StrictFunctor& top) {
  StrictFunctor left = generating_functor(cell, base.ring);
  const auto& X = left.source;
  const auto& Y = left.target;
  if (presentation_to_text(top.source) != presentation_to_text(X))
    throw AlgebraError("attachment must start at " + X.name);
  if (presentation_to_text(top.target) != presentation_to_text(base))
    throw AlgebraError("attachment must land in " + base.name);
  auto rep = check_functor(top);
  if (rep.status != Status::Pass)
    throw AlgebraError("invalid attachment: " + (rep.witnesses.empty() ? std::string("?") : rep.witnesses.front()));

  GluedCategory g;
  g.base = base;
  g.cell = cell;
  g.top = top;
  auto& r = g.result;
  r.name = base.name + "+" + cell.name();
  r.ring = base.ring;
  r.kind = base.kind;
  if (Y.kind == Kind::Ainf && base.kind == Kind::DG) {
    if (!base.quiver.generators().empty() || !base.relations.empty())
      throw AlgebraError("A-infinity cells attach only to A-infinity bases or bases without generators");
    r.kind = Kind::Ainf;
  }
  if (Y.kind == Kind::DG && base.kind == Kind::Ainf) throw AlgebraError("DG cells attach only to DG bases");
  r.quiver = base.quiver;
  r.diff = base.diff;
  r.relations = base.relations;
  if (r.kind != base.kind) {
    r.diff.clear();
    r.relations.clear();
  }

  // objects
  std::vector<int> yobj(Y.quiver.objects().size(), -1);
  for (size_t i = 0; i < left.object_map.size(); ++i) yobj[left.object_map[i]] = top.object_map[i];
  for (size_t o = 0; o < yobj.size(); ++o)
    if (yobj[o] < 0) {
      std::string label = fresh(Y.quiver.objects()[o], [&](const std::string& s) { return r.quiver.has_object(s); });
      yobj[o] = r.quiver.add_object(label);
      g.new_objects.insert(yobj[o]);
    }
  // generators
  std::map<int, Element> identified;  // Y generator -> base element
  for (size_t i = 0; i < X.quiver.generators().size(); ++i) {
    Element e = left.image_of_generator(static_cast<int>(i));
    int ygen = e.terms.begin()->first[0];
    identified[ygen] = top.image_of_generator(static_cast<int>(i));
  }
  std::map<int, int> ygen_id;
  for (size_t i = 0; i < Y.quiver.generators().size(); ++i) {
    int yg = static_cast<int>(i);
    if (identified.count(yg)) continue;
    const auto& gen = Y.quiver.generator(yg);
    std::string name = fresh(gen.name, [&](const std::string& s) { return r.quiver.generator_index(s) >= 0; });
    int id = r.quiver.add_generator(name, r.quiver.objects()[yobj[gen.source]], r.quiver.objects()[yobj[gen.target]],
                                    gen.degree);
    ygen_id[yg] = id;
    g.cell_generators.insert(id);
  }
  // corner Y -> result
  auto& c = g.corner;
  c.name = "corner";
  c.source = Y;
  c.target = r;
  c.object_map = yobj;
  for (const auto& [yg, e] : identified) {
    Element t = e;
    t.kind = r.kind;
    c.generator_map[yg] = t;
  }
  for (const auto& [yg, id] : ygen_id) c.generator_map[yg] = monomial_element(r.quiver, r.kind, r.ring, Monomial{id});
  for (const auto& [yg, id] : ygen_id) {
    Element d = c.apply(Y.d_of(yg));
    if (!d.is_zero()) r.diff[id] = d;
  }
  c.target = r;
  // inc base -> result
  auto& inc = g.inc;
  inc.name = "inc";
  inc.source = base;
  inc.target = r;
  for (size_t o = 0; o < base.quiver.objects().size(); ++o) inc.object_map.push_back(static_cast<int>(o));
  for (size_t i = 0; i < base.quiver.generators().size(); ++i)
    inc.generator_map[static_cast<int>(i)] = monomial_element(r.quiver, r.kind, r.ring, Monomial{static_cast<int>(i)});
  return g;
}

LayeredHom layered_hom(const GluedCategory& g, int x, int y, int m_max, const TruncationConfig& cfg) {
  check_layered(g);
  LayeredHom out;
  auto h0 = hom_complex(g.base, x, y, cfg);
  out.approximate = !h0->exact_flag;
  out.layers[0] = h0->result;
  if (g.cell.tag != Tag::Q)
    for (int m = 1; m <= m_max; ++m) {
      auto f = layer_factors(g, x, y, m, cfg, cfg);
      out.approximate = out.approximate || f.approximate;
      out.layers[m] = tensor_all(f.fs);
    }
  std::vector<FiniteComplex> all;
  for (const auto& [m, c] : out.layers) all.push_back(c);
  out.assembly = direct_sum(g.base.ring, all);
  return out;
}

Homotopy layer_homotopy(const GluedCategory& g, int x, int y, int m, const TruncationConfig& cfg) {
  if (g.cell.tag != Tag::R || m < 1) throw AlgebraError("explicit layer homotopies exist for R(n) layers m >= 1");
  auto f = layer_factors(g, x, y, m, cfg, cfg);
  const auto& ring = g.base.ring;
  // D^n: h(de) = e
  FiniteComplex dn = disk(g.cell.n, ring);
  Homotopy hd;
  hd[g.cell.n] = Matrix::identity(ring, 1);
  // (D (x) rest) then A (x) (D (x) rest)
  std::vector<FiniteComplex> rest(f.fs.begin() + f.cell_index + 1, f.fs.end());
  FiniteComplex tail = tensor_all(rest);
  Homotopy h = tensor_homotopy_left(dn, hd, tail);
  FiniteComplex inner = tensor(dn, tail);
  std::vector<FiniteComplex> head(f.fs.begin(), f.fs.begin() + f.cell_index);
  for (int i = static_cast<int>(head.size()) - 1; i >= 0; --i) {
    h = tensor_homotopy_right(head[i], inner, h);
    inner = tensor(head[i], inner);
  }
  return h;
}

std::map<int, FiniteComplex> presentation_layers(const GluedCategory& g, int x, int y, const TruncationConfig& cfg) {
  auto h = hom_complex(g.result, x, y, cfg);
  const auto& c = h->result;
  std::map<int, std::map<int, std::vector<int>>> idx;  // m -> k -> basis positions
  for (int k : c.degrees()) {
    const auto& b = h->basis(k);
    for (size_t i = 0; i < b.size(); ++i) idx[count_cell_leaves(g, b[i])][k].push_back(static_cast<int>(i));
  }
  std::map<int, FiniteComplex> out;
  for (const auto& [m, degs] : idx) {
    std::map<int, std::vector<std::string>> basis;
    std::map<int, Matrix> diff;
    for (const auto& [k, pos] : degs) {
      for (int i : pos) basis[k].push_back(c.labels(k)[i]);
      Matrix d = c.d(k).select_columns(pos);
      std::vector<int> rows;
      if (degs.count(k + 1)) rows = degs.at(k + 1);
      // everything outside the rows of layer m must vanish
      std::set<int> keep(rows.begin(), rows.end());
      for (int r = 0; r < d.rows(); ++r)
        if (!keep.count(r) && !d.row(r).empty())
          throw AlgebraError("the differential changes the number of cell factors");
      diff[k] = d.select_rows(rows);
    }
    out[m] = FiniteComplex(c.ring(), basis, diff);
  }
  return out;
}

CheckReport check_inc_quasi_iso(const GluedCategory& g, int m_max, const TruncationConfig& cfg) {
  check_layered(g);
  CheckReport rep;
  rep.id = "inc:" + g.result.name;
  rep.ring = g.base.ring.name();
  rep.max_word_length = cfg.max_word_length;
  rep.max_arity = cfg.max_arity;
  rep.max_layers = m_max;
  bool fail = false, approx = false;
  auto& wit = rep.witnesses;
  int nb = static_cast<int>(g.base.quiver.objects().size());
  const auto& ring = g.base.ring;

  if (g.cell.tag == Tag::Q) {
    wit.push_back("Q cell: homs between base objects are unchanged (layer 0 only)");
  } else if (g.cell.tag == Tag::R) {
    auto w = generator_weights(g.result);
    for (int x = 0; x < nb; ++x)
      for (int y = 0; y < nb; ++y) {
        auto lh = layered_hom(g, x, y, m_max, cfg);
        approx = approx || lh.approximate;
        std::string pair = g.base.quiver.objects()[x] + "->" + g.base.quiver.objects()[y];
        for (int m = 1; m <= m_max; ++m) {
          auto h = layer_homotopy(g, x, y, m, cfg);
          if (!verify_contracting_homotopy(lh.layers[m], h)) {
            fail = true;
            wit.push_back("layer " + std::to_string(m) + " of " + pair + ": h d + d h != id");
          }
        }
        if (nonzero_homology(lh.assembly) != nonzero_homology(lh.layers[0])) {
          fail = true;
          wit.push_back("homology of the assembly of " + pair + " differs from the base hom");
        }
        // the displayed formula against the words of the pushout presentation
        auto pl = presentation_layers(g, x, y, cfg);
        for (int m = 0; m <= m_max; ++m) {
          const auto& t = lh.layers[m];
          // largest weight of a word in layer m
          int top = 0;
          if (m == 0) {
            auto hb = hom_complex(g.base, x, y, cfg);
            for (int k : t.degrees())
              for (const auto& mono : hb->basis(k)) top = std::max(top, monomial_weight(w, mono));
          } else {
            int cellw = 0;
            for (int id : g.cell_generators) cellw = std::max(cellw, w[id]);
            top = m * cellw;
            std::vector<std::pair<int, int>> ends;
            int in = g.top.object_map[0], out = g.top.object_map[1];
            ends.push_back({out, y});
            for (int i = 1; i < m; ++i) ends.push_back({out, in});
            ends.push_back({x, in});
            for (auto [a, b] : ends) {
              auto hb = hom_complex(g.base, a, b, cfg);
              int best = 0;
              for (int k : hb->result.degrees())
                for (const auto& mono : hb->basis(k)) best = std::max(best, monomial_weight(w, mono));
              top += best;
            }
          }
          if (top > cfg.max_word_length) continue;
          FiniteComplex p = pl.count(m) ? pl.at(m) : FiniteComplex(ring);
          std::set<int> degs;
          for (int k : t.degrees()) degs.insert(k);
          for (int k : p.degrees()) degs.insert(k);
          bool same = true;
          for (int k : degs) same = same && p.dim(k) == t.dim(k);
          same = same && nonzero_homology(p) == nonzero_homology(t);
          if (!same) {
            fail = true;
            wit.push_back("layer " + std::to_string(m) + " of " + pair + " does not match the pushout words");
          }
        }
      }
    if (!fail)
      wit.push_back("every layer 1.." + std::to_string(m_max) + " of every base pair contracts by the tensor homotopy");
  } else {
    // F cells: Kbar(z,z) within windows, then Kuenneth over the base factors
    approx = true;
    const auto& y = g.corner.source;
    int one = y.quiver.object_index("1"), two = y.quiver.object_index("2");
    TruncationConfig small = cfg, big = enlarged(y, cfg);
    auto ks = without_unit(*hom_complex(y, one, one, small));
    auto kb = without_unit(*hom_complex(y, one, one, big));
    std::map<int, int> ranks;
    for (int k : ks.degrees()) {
      int r = persistent_rank(ks, kb, k);
      if (r) ranks[k] = r;
    }
    int z = g.top.object_map[0];
    if (!ranks.empty()) {
      std::string where = "Kbar(z,z) = " + y.name + "(1,1)/R*1 keeps classes within (L=" +
                          std::to_string(small.max_word_length) + ", boundaries L=" +
                          std::to_string(big.max_word_length) + "): " + degree_list(ranks);
      wit.push_back(where);
      for (int x = 0; x < nb; ++x)
        for (int yy = 0; yy < nb; ++yy) {
          auto a = homology_all(hom_complex(g.base, z, yy, cfg)->result);
          auto b = homology_all(hom_complex(g.base, x, z, cfg)->result);
          bool ha = std::any_of(a.begin(), a.end(), [](const auto& p) { return !p.second.is_zero(); });
          bool hb = std::any_of(b.begin(), b.end(), [](const auto& p) { return !p.second.is_zero(); });
          if (ha && hb) {
            fail = true;
            wit.push_back("layer 1 of " + g.base.quiver.objects()[x] + "->" + g.base.quiver.objects()[yy] +
                          " has homology H(M(z,y)) (x) H(Kbar) (x) H(M(x,z)) != 0, so inc is not a quasi-isomorphism");
          }
        }
    } else {
      wit.push_back("Kbar(z,z) has no persistent homology within the window; every layer has a Kbar factor");
    }
    // the new object is isomorphic to z in H^0
    TruncationConfig hcfg = classification_config(g.inc, cfg);
    hcfg.max_word_length = std::min(hcfg.max_word_length, 3);
    H0Category h(g.result, hcfg, enlarged(g.result, hcfg));
    int nz = g.corner.object_map[two];
    Element f = g.corner.apply(y.parse("f"));
    auto inv = h.inverse(z, nz, f);
    if (inv) {
      wit.push_back("[f] : " + g.result.quiver.objects()[z] + " -> " + g.result.quiver.objects()[nz] +
                    " is invertible in H^0");
    } else {
      fail = true;
      wit.push_back("[f] is not invertible in H^0 within the window");
    }
  }
  rep.status = fail ? Status::Fail : approx ? Status::ApproximatePass : Status::Pass;
  return rep;
}

}  // namespace ainf
