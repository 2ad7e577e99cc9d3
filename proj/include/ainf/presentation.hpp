#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ainf/ring.hpp"

namespace ainf {

enum class Kind { DG, Ainf };

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Generator {
  std::string name;
  int source = 0;  // object index
  int target = 0;
  int degree = 0;
};

/// Objects are labelled by strings; generators refer to objects by index.
class GradedQuiver {
 public:
  int add_object(const std::string& label);
  int add_generator(const std::string& name, const std::string& source, const std::string& target,
                    int degree);

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& generator(int id) const { return gens_.at(id); }
  int object_index(const std::string& label) const;  // -1 if absent
  int generator_index(const std::string& name) const;  // -1 if absent
  bool has_object(const std::string& label) const { return object_index(label) >= 0; }

 private:
  std::vector<std::string> objects_;
  std::vector<Generator> gens_;
  std::map<std::string, int> object_ids_;
  std::map<std::string, int> gen_ids_;
};

/// Monomials are prefix codes. A code c >= 0 is a generator leaf, c in
/// [-999, -2] is an m^{-c} node followed by its children, and
/// c <= kUnitBase is the unit at object kUnitBase - c. DG words are
/// leaf sequences with the post-composed factor first; `g*f` is [g, f].
using Monomial = std::vector<int>;

constexpr int kUnitBase = -1000;
inline int unit_code(int object) { return kUnitBase - object; }
inline bool is_unit_code(int c) { return c <= kUnitBase; }
inline int unit_object(int c) { return kUnitBase - c; }
inline Monomial unit_monomial(int object) { return {unit_code(object)}; }
inline bool is_unit(const Monomial& m) { return m.size() == 1 && is_unit_code(m[0]); }

struct TruncationConfig {
  int max_word_length = 6;
  int max_arity = 4;
};

int monomial_source(const GradedQuiver& q, Kind kind, const Monomial& m);
int monomial_target(const GradedQuiver& q, Kind kind, const Monomial& m);
/// Sum of leaf degrees plus 2 - k for every m^k node.
int monomial_degree(const GradedQuiver& q, Kind kind, const Monomial& m);
/// Number of generator leaves.
int leaf_count(const Monomial& m);
/// Largest k of an m^k node, 0 for words and units.
int max_node_arity(const Monomial& m);
/// Generator ids in left-to-right order.
std::vector<int> leaves(const Monomial& m);
/// Throws AlgebraError unless composable and well formed.
void check_monomial(const GradedQuiver& q, Kind kind, const Monomial& m);

/// Homogeneous linear combination of monomials with common endpoints and
/// degree. A zero element may be untyped (source = -1); it adopts the type
/// of whatever it is combined with.
struct Element {
  Kind kind = Kind::DG;
  RingSpec ring;
  int source = -1;
  int target = -1;
  int degree = 0;
  std::map<Monomial, Scalar> terms;
  bool truncated = false;

  bool typed() const { return source >= 0; }
  bool is_zero() const { return terms.empty(); }
  Scalar coefficient(const Monomial& m) const;
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }
};

Element zero_element(Kind kind, const RingSpec& ring);
Element typed_zero(Kind kind, const RingSpec& ring, int source, int target, int degree);
Element monomial_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const Monomial& m,
                         const Scalar& c = 1);
Element generator_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const std::string& name);
Element unit_element(Kind kind, const RingSpec& ring, int object);

/// Adds c * m; zero results are removed.
void add_term(Element& e, const Monomial& m, const Scalar& c);
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element scale(const Element& a, const Scalar& c);
/// a o b for DG words (apply b first). Units are absorbed.
Element compose_word(const GradedQuiver& q, const Element& a, const Element& b);
/// m^k(children) with strict-unit rewrites; max_arity <= 0 means unbounded.
Element graft(const GradedQuiver& q, int k, const std::vector<Element>& children, int max_arity = 0);
/// Drop monomials with more than cfg.max_word_length generator leaves.
Element truncate(const Element& e, const TruncationConfig& cfg);

/// Graft a single node over monomials with the unit rules applied. Returns
/// false when the result vanishes.
bool graft_monomial(int k, const std::vector<Monomial>& children, Monomial& out);
/// Concatenate DG words with unit absorption.
Monomial concat_words(const Monomial& a, const Monomial& b);

/// Strict-unit normal form of a tree that may carry unit leaves anywhere.
/// Returns false when the tree is zero. The randomized variant applies the
/// rewrites in a random order (used to test confluence).
bool normalize_units(const Monomial& m, Monomial& out);
bool normalize_units_random(const Monomial& m, Monomial& out, std::mt19937& rng);

/// DG shadow of a tree: m^2 nodes become concatenation, m^{k>=3} vanish.
bool shadow_word(const Monomial& tree, Monomial& out);

std::string monomial_to_string(const GradedQuiver& q, Kind kind, const Monomial& m);
std::string element_to_string(const GradedQuiver& q, const Element& e);

/// Parse the element syntax: sums of terms such as `2*g*f`, `-1/2 x`,
/// `m2(g,f)`, `id@1`, `(a + b)*c`, or `0`.
Element parse_element(const GradedQuiver& q, Kind kind, const RingSpec& ring, const std::string& text);

}  // namespace ainf
