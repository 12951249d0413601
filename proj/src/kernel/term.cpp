#include "globth/term.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace globth {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t hash_combine(uint64_t h, uint64_t v) { return mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL)); }

uint64_t hash_string(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::string hex64(uint64_t h) {
  static const char *digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 15];
  return s;
}

std::string flavor_name(Flavor f) { return f == Flavor::Free ? "free" : "unique"; }

namespace {

struct Store {
  std::map<std::vector<int>, std::unique_ptr<Arity>> arities;
  std::deque<TermNode> nodes;
  struct NodeHash {
    std::size_t operator()(Term t) const { return static_cast<std::size_t>(t->hash); }
  };
  struct NodeEq {
    bool operator()(Term a, Term b) const {
      return a->hash == b->hash && a->arity == b->arity && a->dim == b->dim &&
             a->is_gen == b->is_gen && a->cell == b->cell && a->gen == b->gen && a->args == b->args;
    }
  };
  std::unordered_set<Term, NodeHash, NodeEq> terms;
  std::unordered_map<uint64_t, std::unique_ptr<Generator>> gens;
};

Store &store() {
  static Store s;
  return s;
}

Term intern_node(TermNode &&proto) {
  uint64_t h = hash_combine(proto.arity->hash, static_cast<uint64_t>(proto.dim));
  h = hash_combine(h, proto.is_gen ? 1 : 0);
  h = hash_combine(h, proto.is_gen ? proto.gen->id : static_cast<uint64_t>(proto.cell));
  for (Term a : proto.args) h = hash_combine(h, a->hash);
  proto.hash = h;
  auto &s = store();
  auto it = s.terms.find(&proto);
  if (it != s.terms.end()) return *it;
  s.nodes.push_back(std::move(proto));
  Term t = &s.nodes.back();
  s.terms.insert(t);
  return t;
}

GenRef intern_gen(Generator &&g) {
  auto &s = store();
  auto it = s.gens.find(g.id);
  if (it != s.gens.end()) {
    const Generator &o = *it->second;
    if (o.kind != g.kind || o.k != g.k || o.copy != g.copy || o.flavor != g.flavor ||
        o.arity != g.arity || o.src != g.src || o.tgt != g.tgt || o.label != g.label)
      throw std::logic_error("generator hash collision on " + hex64(g.id));
    return it->second.get();
  }
  auto owned = std::make_unique<Generator>(std::move(g));
  GenRef r = owned.get();
  s.gens.emplace(r->id, std::move(owned));
  return r;
}

} // namespace

ArityRef intern_arity(const Table &t) {
  auto &s = store();
  auto it = s.arities.find(t.dims);
  if (it != s.arities.end()) return it->second.get();
  auto a = std::make_unique<Arity>();
  a->table = t;
  a->pd = realize(t);
  a->text = t.str();
  a->hash = hash_string("arity" + a->text);
  ArityRef r = a.get();
  s.arities.emplace(t.dims, std::move(a));
  return r;
}

ArityRef intern_arity(const std::string &text) { return intern_arity(parse_table(text)); }

GenRef intern_lift(int k, int copy, Flavor flavor, ArityRef arity, Term src, Term tgt) {
  if (!src || !tgt || src->dim != k || tgt->dim != k || src->arity != arity || tgt->arity != arity)
    throw std::invalid_argument("lift boundary must be two " + std::to_string(k) +
                                "-dimensional terms over " + arity->text);
  uint64_t h = hash_string("lift");
  h = hash_combine(h, static_cast<uint64_t>(k));
  h = hash_combine(h, arity->hash);
  h = hash_combine(h, src->hash);
  h = hash_combine(h, tgt->hash);
  h = hash_combine(h, flavor == Flavor::Free ? 0 : 1);
  if (copy > 0) h = hash_combine(h, 0x100 + static_cast<uint64_t>(copy));
  return intern_gen(Generator{h, GenKind::Lift, k, copy, flavor, arity, src, tgt, ""});
}

GenRef intern_sphere_cell(const std::string &label, int dim, ArityRef arity, Term src, Term tgt) {
  if (dim > 0 && (!src || !tgt || src->dim != dim - 1 || tgt->dim != dim - 1))
    throw std::invalid_argument("sphere cell boundary has wrong dimension");
  uint64_t h = hash_string("sphere:" + label);
  h = hash_combine(h, static_cast<uint64_t>(dim));
  h = hash_combine(h, arity->hash);
  if (src) h = hash_combine(h, src->hash);
  if (tgt) h = hash_combine(h, tgt->hash);
  return intern_gen(Generator{h, GenKind::Sphere, dim, 0, Flavor::Free, arity, src, tgt, label});
}

GenRef find_generator(uint64_t id) {
  auto &s = store();
  auto it = s.gens.find(id);
  return it == s.gens.end() ? nullptr : it->second.get();
}

Term base_term(ArityRef p, int d, int index) {
  if (index < 0 || index >= p->pd.cells(d))
    throw std::out_of_range("no cell(" + std::to_string(d) + "," + std::to_string(index) +
                            ") in " + p->text);
  return intern_node(TermNode{p, d, false, index, nullptr, {}, 0, 0, 0});
}

std::vector<Term> base_terms(ArityRef p, int m) {
  std::vector<Term> out;
  for (int i = 0; i < p->pd.cells(m); ++i) out.push_back(base_term(p, m, i));
  return out;
}

Term gen_term(GenRef g, ArityRef p, std::vector<Term> args) {
  int depth = 0, size = 1;
  for (Term a : args) {
    depth = std::max(depth, a->depth);
    size += a->size;
  }
  return intern_node(TermNode{p, g->dim(), true, -1, g, std::move(args), 0, depth + 1, size});
}

std::vector<Term> identity_tuple(ArityRef p) {
  std::vector<Term> out;
  for (int i = 0; i < p->table.peaks(); ++i)
    out.push_back(base_term(p, p->table.peak(i), p->pd.peak_top[i]));
  return out;
}

Term generic_term(GenRef g) { return gen_term(g, g->arity, identity_tuple(g->arity)); }

Term src_of(Term t) {
  if (t->dim == 0) throw std::invalid_argument("boundary of a 0-dimensional term");
  if (t->src_memo) return t->src_memo;
  Term r = t->is_gen ? substitute(t->gen->src, t->args, t->arity)
                     : base_term(t->arity, t->dim - 1, t->arity->pd.src[t->dim][t->cell]);
  t->src_memo = r;
  return r;
}

Term tgt_of(Term t) {
  if (t->dim == 0) throw std::invalid_argument("boundary of a 0-dimensional term");
  if (t->tgt_memo) return t->tgt_memo;
  Term r = t->is_gen ? substitute(t->gen->tgt, t->args, t->arity)
                     : base_term(t->arity, t->dim - 1, t->arity->pd.tgt[t->dim][t->cell]);
  t->tgt_memo = r;
  return r;
}

Term iter_boundary(Term t, int steps, int side) {
  for (int i = 0; i < steps; ++i) t = side == 0 ? src_of(t) : tgt_of(t);
  return t;
}

Term cell_image(ArityRef q, int d, int index, const std::vector<Term> &sigma) {
  const CellOrigin &o = q->pd.origin[d][index];
  return iter_boundary(sigma[o.peak], o.steps, o.side);
}

namespace {

Term subst_rec(Term t, const std::vector<Term> &sigma, ArityRef p,
               std::unordered_map<Term, Term> &memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Term r;
  if (!t->is_gen) {
    r = cell_image(t->arity, t->dim, t->cell, sigma);
  } else {
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (Term a : t->args) args.push_back(subst_rec(a, sigma, p, memo));
    r = gen_term(t->gen, p, std::move(args));
  }
  memo.emplace(t, r);
  return r;
}

} // namespace

Term substitute(Term t, const std::vector<Term> &sigma, ArityRef p) {
  if (static_cast<int>(sigma.size()) != t->arity->table.peaks())
    throw std::invalid_argument("substitute: tuple has " + std::to_string(sigma.size()) +
                                " components, arity " + t->arity->text + " needs " +
                                std::to_string(t->arity->table.peaks()));
  for (int i = 0; i < static_cast<int>(sigma.size()); ++i)
    if (sigma[i]->arity != p || sigma[i]->dim != t->arity->table.peak(i))
      throw std::invalid_argument("substitute: component " + std::to_string(i) +
                                  " has the wrong arity or dimension");
  std::unordered_map<Term, Term> memo;
  return subst_rec(t, sigma, p, memo);
}

int term_compare(Term a, Term b) {
  if (a == b) return 0;
  if (a->arity != b->arity) return table_less(a->arity->table, b->arity->table) ? -1 : 1;
  if (a->is_gen != b->is_gen) return a->is_gen ? 1 : -1;
  if (!a->is_gen) {
    if (a->dim != b->dim) return a->dim < b->dim ? -1 : 1;
    return a->cell < b->cell ? -1 : 1;
  }
  if (a->gen != b->gen) return a->gen->id < b->gen->id ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    int c = term_compare(a->args[i], b->args[i]);
    if (c) return c;
  }
  return 0;
}

std::string term_str(Term t) {
  if (!t->is_gen) return "cell(" + std::to_string(t->dim) + "," + std::to_string(t->cell) + ")";
  std::string s = t->gen->name() + "[";
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (i) s += "; ";
    s += term_str(t->args[i]);
  }
  return s + "]";
}

std::string tuple_str(const std::vector<Term> &comps) {
  std::string s = "[";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) s += ", ";
    s += term_str(comps[i]);
  }
  return s + "]";
}

namespace {

void collect_rec(Term t, std::vector<GenRef> &out, std::unordered_set<GenRef> &seen) {
  if (!t->is_gen) return;
  GenRef g = t->gen;
  if (!seen.count(g)) {
    if (g->src) collect_rec(g->src, out, seen);
    if (g->tgt) collect_rec(g->tgt, out, seen);
    if (seen.insert(g).second) out.push_back(g);
  }
  for (Term a : t->args) collect_rec(a, out, seen);
}

} // namespace

void collect_generators(Term t, std::vector<GenRef> &out) {
  std::unordered_set<GenRef> seen(out.begin(), out.end());
  collect_rec(t, out, seen);
}

} // namespace globth
