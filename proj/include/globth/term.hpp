#pragma once

#include "globth/core.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace globth {

// Deterministic 64-bit hashing; never std::hash.
uint64_t mix64(uint64_t x);
uint64_t hash_combine(uint64_t h, uint64_t v);
uint64_t hash_string(std::string_view s);
std::string hex64(uint64_t h);

// Interned table together with its realization.
struct Arity {
  Table table;
  PastingDiagram pd;
  uint64_t hash;
  std::string text;
};
using ArityRef = const Arity *;

ArityRef intern_arity(const Table &t);
ArityRef intern_arity(const std::string &text);

enum class Flavor { Free, Unique };
enum class GenKind { Lift, Sphere };

std::string flavor_name(Flavor f);

struct Generator;
using GenRef = const Generator *;

struct TermNode;
using Term = const TermNode *;

// Hash-consed normal-form term. Pointer equality is syntactic equality.
struct TermNode {
  ArityRef arity;
  int dim;
  bool is_gen;
  int cell;                // base cell ordinal
  GenRef gen;              // generator for Gen nodes
  std::vector<Term> args;  // one per peak of gen->arity, all over `arity`
  uint64_t hash;
  int depth;               // generator nesting
  int size;                // number of generator nodes
  mutable Term src_memo = nullptr;
  mutable Term tgt_memo = nullptr;
};

struct Generator {
  uint64_t id;
  GenKind kind;
  int k;         // lifts: boundary dimension; sphere cells: own dimension
  int copy;      // occurrence index of the layer
  Flavor flavor;
  ArityRef arity;
  Term src;      // null for 0-dimensional sphere cells
  Term tgt;
  std::string label; // sphere cells only

  int dim() const { return kind == GenKind::Lift ? k + 1 : k; }
  std::string name() const { return "g#" + hex64(id); }
};

GenRef intern_lift(int k, int copy, Flavor flavor, ArityRef arity, Term src, Term tgt);
GenRef intern_sphere_cell(const std::string &label, int dim, ArityRef arity, Term src, Term tgt);
GenRef find_generator(uint64_t id);

Term base_term(ArityRef p, int d, int index);
std::vector<Term> base_terms(ArityRef p, int m);
// Gen node without compatibility checks; callers guarantee well-formedness.
Term gen_term(GenRef g, ArityRef p, std::vector<Term> args);
// Top cells of the peaks of p: the projections.
std::vector<Term> identity_tuple(ArityRef p);
Term generic_term(GenRef g);

// Boundaries of normal forms; src(Gen(g, s)) = f_g[s].
Term src_of(Term t);
Term tgt_of(Term t);
Term iter_boundary(Term t, int steps, int side);

// t over q, sigma: p -> q given by components over p.
Term substitute(Term t, const std::vector<Term> &sigma, ArityRef p);

// Image of a cell of realize(q) under a tuple.
Term cell_image(ArityRef q, int d, int index, const std::vector<Term> &sigma);

// Recursive lexicographic order: Base < Gen, base ordinal, generator id, components.
int term_compare(Term a, Term b);
inline bool term_less(Term a, Term b) { return term_compare(a, b) < 0; }

std::string term_str(Term t);
std::string tuple_str(const std::vector<Term> &comps);

// Every generator mentioned in t, boundary terms included, deepest first.
void collect_generators(Term t, std::vector<GenRef> &out);

} // namespace globth
