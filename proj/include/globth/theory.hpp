#pragma once

#include "globth/term.hpp"

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace globth {

struct FragmentBounds {
  int max_arity_length = 3;
  int max_dim = 2;
  int max_depth = 2;
  int max_iterations = 2;
  // Extra truncation knobs: most generator nodes per term (0 = no limit) and
  // tallest arity considered for pairs (-1 = only the admissibility bound).
  int max_size = 2;
  int max_arity_height = 1;

  int size_cap() const { return max_size <= 0 ? (1 << 28) : max_size; }
  int arity_height_cap(int k) const {
    return max_arity_height < 0 ? k + 1 : std::min(k + 1, max_arity_height);
  }
  void validate() const;
  std::string str() const;
  friend bool operator==(const FragmentBounds &, const FragmentBounds &) = default;
};

enum class Mode { Weak, Strict };
std::string mode_name(Mode m);
inline Flavor flavor_for(Mode m) { return m == Mode::Weak ? Flavor::Free : Flavor::Unique; }

enum class TruncStatus { Fixpoint, Bound, Lazy };
std::string status_name(TruncStatus s);

struct BoundExhaustion : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndeclaredGenerator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parallel pair of k-dimensional terms over an arity of height <= k+1.
struct AdmissiblePair {
  ArityRef arity;
  int dim;
  Term f, g;
  std::string str() const;
};

// A block of generators. Lift layers (k >= 0) admit every lift descriptor
// with matching (k, copy, flavor) whose pair is valid in the prefix theory
// and lies within bounds; explicit layers admit exactly their listed
// generators.
struct Layer {
  int k = -1;
  int copy = 0;
  Flavor flavor = Flavor::Free;
  bool explicit_only = false;
  bool materialized = false;
  std::vector<GenRef> gens;
  std::unordered_set<GenRef> members;
  TruncStatus status = TruncStatus::Lazy;
  int iterations = 0;
  int iteration_cap = 0; // 0 = bounds.max_iterations
  std::vector<std::size_t> rounds; // class counts per saturation round (unique flavor)

  void add(GenRef g) {
    if (members.insert(g).second) gens.push_back(g);
  }
};

class Theory : public std::enable_shared_from_this<Theory> {
public:
  using Ptr = std::shared_ptr<const Theory>;

  static Ptr base(Mode mode, const FragmentBounds &b);
  // R_k (weak) or S_k (strict) as a lazily materialized layer; cached per parent.
  Ptr extend(int k) const;
  // assign_copy = false keeps layer->copy (used to continue an existing layer).
  Ptr with_layer(std::shared_ptr<Layer> layer, bool assign_copy = true) const;

  Mode mode() const { return mode_; }
  const FragmentBounds &bounds() const { return bounds_; }
  std::size_t num_layers() const { return depth_; }
  const Layer &layer(std::size_t i) const;
  std::shared_ptr<Layer> layer_ptr(std::size_t i) const;
  Ptr prefix(std::size_t n) const;
  Ptr parent() const { return parent_; }
  std::string word() const;
  int count_layers_with_k(int k) const;

  int layer_of(GenRef g) const; // -1 when g is not a generator here
  bool contains(GenRef g) const { return layer_of(g) >= 0; }
  void require_term(Term t) const;
  bool valid_term(Term t) const;

  bool equal(Term a, Term b) const;
  const std::string &key(Term t) const;

  const std::vector<GenRef> &layer_generators(std::size_t i) const;
  std::vector<GenRef> generators() const;
  const std::map<ArityRef, std::vector<GenRef>> &generators_of_dim(int m) const;

  const std::vector<Term> &terms(ArityRef p, int m, int depth, int size) const;
  const std::vector<Term> &terms(ArityRef p, int m) const;
  std::vector<ArityRef> pair_arities(int k) const;
  std::vector<AdmissiblePair> pairs(int k) const;

  // Pair class used to detect "already lifted" pairs.
  std::string pair_key(ArityRef p, Term f, Term g) const;

  Theory(Mode mode, FragmentBounds b, Ptr parent, std::shared_ptr<Layer> layer);

private:
  void materialize(std::size_t i) const;
  bool lift_admissible(GenRef g) const;

  Mode mode_;
  FragmentBounds bounds_;
  Ptr parent_;
  std::shared_ptr<Layer> layer_;
  std::size_t depth_;

  mutable std::map<int, std::weak_ptr<const Theory>> children_;
  mutable std::unordered_map<GenRef, int> layer_memo_;
  mutable std::unordered_set<Term> valid_memo_;
  mutable std::map<int, std::map<ArityRef, std::vector<GenRef>>> by_dim_;
  mutable std::map<std::tuple<ArityRef, int, int, int>, std::vector<Term>> term_memo_;
};

// Canonical class key of the strict congruence: reduced groupoid words in
// dimension 1, boundary keys for admissible arities, structural signatures
// otherwise.
const std::string &strict_key(Term t);

struct Word {
  int start = 0;
  int end = 0;
  std::vector<int> letters; // +(e+1) or -(e+1)
  std::string str() const;
  friend bool operator==(const Word &, const Word &) = default;
};
Word term_word(Term t); // dimension-1 terms

// Validated tuple construction; throws naming the failing valley.
struct TupleError : std::invalid_argument {
  int valley;
  TupleError(const std::string &msg, int v) : std::invalid_argument(msg), valley(v) {}
};
std::vector<Term> mk_tuple(const Theory &T, ArityRef source, ArityRef target,
                           const std::vector<Term> &components);
Term mk_gen(const Theory &T, GenRef g, ArityRef source, const std::vector<Term> &components);

Term normalize(const Theory &T, Term t);
std::pair<Term, Term> boundary(const Theory &T, Term t);

std::vector<Term> enumerate_terms(const Theory &T, ArityRef p, int m, int depth);

// Text syntax: cell(d,i), g#<hex>[t1; ...; tn], s(t), t(t).
struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string &msg, int l, int c)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l),
        column(c) {}
};
struct ParsedTerm {
  Term term;
  int rewrites; // boundary operators eliminated while normalizing
};
ParsedTerm parse_term(const std::string &text, ArityRef p, const Theory *T, int line = 1,
                      int column_offset = 0);

// Union-find saturation over a finite universe with the rules "parallel
// terms over admissible arities merge" and "congruent generator
// applications merge". Used as an independent route to strict classes.
struct Saturation {
  std::vector<Term> universe;
  std::unordered_map<Term, int> index;
  std::vector<int> rep;
  std::vector<std::size_t> class_counts; // after each round, round 0 = initial
  bool converged = false;
  int find(Term t) const;
};
Saturation saturate(std::vector<Term> universe, int max_rounds);

class Morphism {
public:
  using Ptr = std::shared_ptr<const Morphism>;
  using Rule = std::function<Term(GenRef)>;

  Morphism(Theory::Ptr source, Theory::Ptr target, Rule rule, std::string name);

  Term on_generator(GenRef g) const;
  Term apply(Term t) const;

  const Theory::Ptr source, target;
  const std::string name;

private:
  Rule rule_;
  mutable std::unordered_map<GenRef, Term> gen_memo_;
  mutable std::unordered_map<Term, Term> term_memo_;
};

struct MorphismError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Morphism::Ptr identity_morphism(Theory::Ptr T);
// Generator-preserving map; every generator of A must belong to B.
Morphism::Ptr inclusion_morphism(Theory::Ptr A, Theory::Ptr B, std::string name = "incl");
// g after f
Morphism::Ptr compose(Morphism::Ptr g, Morphism::Ptr f);

using LiftChoice = std::function<Term(ArityRef, Term, Term)>;
// T's top layer is the extension; base is defined on T's prefix.
Morphism::Ptr extend_by_universal_property(Theory::Ptr T, Theory::Ptr D, Morphism::Ptr base,
                                           LiftChoice choice, std::string name);

// The lift of (f, g) in layer `layer_index` of D, as Gen(delta, id).
Term lift_in_layer(const Theory &D, std::size_t layer_index, ArityRef p, Term f, Term g);

struct MorphismCheck {
  bool ok = true;
  std::size_t checked = 0;
  std::string message;
};
MorphismCheck check_morphism(const Morphism &F, const std::vector<GenRef> &gens);

} // namespace globth
