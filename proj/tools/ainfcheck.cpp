#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "ainf/harness.hpp"
#include "ainf/random.hpp"

using namespace ainf;

namespace {

struct Options {
  std::string ring = "q";
  int max_length = 6;
  int max_arity = 4;
  int max_layers = 3;
  std::string format = "text";
  unsigned seed = 1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CategoryPresentation load_category(const std::string& spec, const RingSpec& ring) {
  if (spec.rfind("builtin:", 0) == 0) return builtin(spec.substr(8), ring);
  if (std::filesystem::exists(spec)) return parse_presentation(slurp(spec), ring);
  return builtin(spec, ring);
}

StrictFunctor load_functor(const std::string& spec, const RingSpec& ring) {
  if (std::filesystem::exists(spec))
    return parse_functor(slurp(spec), ring, std::filesystem::path(spec).parent_path().string());
  return catalog_functor(spec, ring);
}

int object_of(const CategoryPresentation& c, const std::string& label) {
  int o = c.quiver.object_index(label);
  if (o < 0) throw UsageError("no object " + label + " in " + c.name);
  return o;
}

int emit(const Options& o, std::vector<CheckReport> reports) {
  sort_reports(reports);
  std::cout << (o.format == "json" ? reports_to_json(reports) : reports_to_text(reports));
  return any_failed(reports) ? 1 : 0;
}

CheckReport homology_report(const CategoryPresentation& c, int x, int y, const TruncationConfig& cfg) {
  CheckReport r;
  r.id = "homology:" + c.name + "(" + c.quiver.objects()[x] + "," + c.quiver.objects()[y] + ")";
  r.ring = c.ring.name();
  r.max_word_length = cfg.max_word_length;
  r.max_arity = cfg.max_arity;
  auto small = hom_complex(c, x, y, cfg);
  std::map<int, ModuleDescription> h;
  if (small->exact_flag) {
    h = homology_all(small->result);
  } else {
    auto big = hom_complex(c, x, y, enlarged(c, cfg));
    for (int k : small->result.degrees()) h[k] = HomClasses(small, big, k).description();
  }
  bool any = false;
  for (const auto& [k, m] : h)
    if (!m.is_zero()) {
      any = true;
      r.witnesses.push_back("H^" + std::to_string(k) + " = " + m.to_string(c.ring));
    }
  if (!any) r.witnesses.push_back("H^k = 0 for all k");
  if (!small->exact_flag) r.witnesses.push_back("window classes: cycles of weight <= L modulo enlarged boundaries");
  r.status = small->exact_flag ? Status::Pass : Status::ApproximatePass;
  return r;
}

CheckReport cone_sweep(const RingSpec& ring, unsigned seed, int count) {
  CheckReport r;
  r.id = "property-cone-sweep";
  r.ring = ring.name();
  std::mt19937 rng(seed);
  int qis = 0;
  bool ok = true;
  for (int i = 0; i < count; ++i) {
    auto f = random_sweep_map(rng, ring);
    bool a = is_quasi_iso(f), b = is_acyclic(cone(f));
    qis += a;
    if (a != b) {
      ok = false;
      r.witnesses.push_back("map " + std::to_string(i) + ": quasi-iso " + std::to_string(a) + ", cone acyclic " +
                            std::to_string(b));
    }
  }
  r.witnesses.push_back(std::to_string(count) + " random maps (seed " + std::to_string(seed) + "), " +
                        std::to_string(qis) + " quasi-isomorphisms, all agreeing with the cone test");
  if (!ok) r.witnesses.pop_back();
  r.status = ok ? Status::Pass : Status::Fail;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strict A-infinity category checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--ring", o.ring, "z, q or fp:<p>");
  app.add_option("--max-length", o.max_length, "window word length L")->check(CLI::PositiveNumber);
  app.add_option("--max-arity", o.max_arity, "largest m^k arity")->check(CLI::Range(2, 16));
  app.add_option("--max-layers", o.max_layers, "pushout layers m_max")->check(CLI::NonNegativeNumber);
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "seed for randomized sweeps");

  auto* cat_cmd = app.add_subcommand("catalog", "list builtins, catalog functors and generating maps");

  std::string hspec, hx, hy;
  auto* hom_cmd = app.add_subcommand("homology", "homology of a hom complex");
  hom_cmd->add_option("category", hspec)->required();
  hom_cmd->add_option("x", hx)->required();
  hom_cmd->add_option("y", hy)->required();

  std::string vspec;
  auto* ver_cmd = app.add_subcommand("verify", "structure checks of a category, or the axioms of a functor file");
  ver_cmd->add_option("input", vspec)->required();

  std::string lfun, lmap;
  bool oracle = false;
  long budget = 20000;
  auto* lift_cmd = app.add_subcommand("lift", "right lifting property of a functor against a generating map");
  lift_cmd->add_option("functor", lfun)->required();
  lift_cmd->add_option("map", lmap)->required();
  lift_cmd->add_flag("--oracle", oracle, "also run the brute-force search (finite fields)");
  lift_cmd->add_option("--budget", budget, "oracle square budget");

  std::string pbase, pcell, pattach;
  auto* po_cmd = app.add_subcommand("pushout", "attach a cell and check the inclusion");
  po_cmd->add_option("base", pbase)->required();
  po_cmd->add_option("cell", pcell)->required();
  po_cmd->add_option("attachment", pattach);

  auto* rec_cmd = app.add_subcommand("recognize", "recognition conditions and explicit computations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : 2;
  }

  try {
    RingSpec ring = RingSpec::parse(o.ring);
    TruncationConfig cfg{o.max_length, o.max_arity};

    if (*cat_cmd) {
      std::cout << "builtins:";
      for (const auto& b : builtin_names()) std::cout << " " << b;
      std::cout << "\nfunctors:";
      for (const auto& f : catalog_functor_names()) std::cout << " " << f;
      std::cout << "\ngenerating maps: Q S(n) R(n) F_dg F_prime J_disk(n)\n";
      return 0;
    }
    if (*hom_cmd) {
      auto c = load_category(hspec, ring);
      return emit(o, {homology_report(c, object_of(c, hx), object_of(c, hy), cfg)});
    }
    if (*ver_cmd) {
      if (std::filesystem::exists(vspec) && slurp(vspec).find("functor:") != std::string::npos) {
        auto f = load_functor(vspec, ring);
        auto r = check_functor(f, cfg);
        r.id = "functor:" + f.name;
        return emit(o, {r});
      }
      auto c = load_category(vspec, ring);
      auto r = check_structure(c, cfg);
      r.id = "structure:" + c.name;
      return emit(o, {r});
    }
    if (*lift_cmd) {
      auto f = load_functor(lfun, ring);
      auto g = GeneratingMap::parse(lmap);
      auto v = has_rlp(f, g, classification_config(f, cfg));
      CheckReport r;
      r.id = "RLP-" + g.name() + "-" + f.name;
      r.ring = ring.name();
      r.max_word_length = cfg.max_word_length;
      r.max_arity = cfg.max_arity;
      r.witnesses.push_back(std::string("has_rlp: ") + (v.value ? "yes" : "no"));
      for (const auto& w : v.witnesses) r.witnesses.push_back(w);
      r.status = v.exact ? Status::Pass : Status::ApproximatePass;
      std::vector<CheckReport> out{r};
      if (oracle) {
        if (!ring.is_field() || ring.kind() != RingSpec::Kind::PrimeField)
          throw UsageError("--oracle needs --ring fp:<p>");
        auto res = oracle_rlp(f, g, budget);
        CheckReport q = r;
        q.id = "RLP-oracle-" + g.name() + "-" + f.name;
        q.max_word_length = 3;
        q.witnesses = {"squares: " + std::to_string(res.squares), "outcome: " + outcome_name(res.outcome)};
        if (res.counterexample) {
          std::string text = functor_to_text(res.counterexample->bottom);
          std::replace(text.begin(), text.end(), '\n', ' ');
          q.witnesses.push_back("square without a lift, bottom " + text);
        }
        bool agree = res.outcome != LiftResult::Outcome::BudgetExhausted && res.lifts() == v.value;
        q.witnesses.push_back(std::string("agrees with has_rlp: ") + (agree ? "yes" : "no"));
        q.status = agree ? Status::Pass : Status::Fail;
        out.push_back(q);
      }
      return emit(o, out);
    }
    if (*po_cmd) {
      auto base = load_category(pbase, ring);
      auto g = pushout(base, GeneratingMap::parse(pcell), pattach);
      auto r = check_inc_quasi_iso(g, o.max_layers, cfg);
      if (o.format == "text") std::cout << presentation_to_text(g.result) << "\n";
      return emit(o, {r});
    }
    if (*rec_cmd) {
      HarnessConfig hc;
      hc.ring = ring;
      hc.cfg = cfg;
      hc.max_layers = o.max_layers;
      auto reports = run_recognition(hc);
      for (auto& r : run_paper_computations(hc)) reports.push_back(r);
      reports.push_back(cone_sweep(ring, o.seed, 50));
      return emit(o, reports);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
