#include "globth/soa.hpp"

#include <sstream>

namespace globth {

SphereData sphere(const Table &p, int k, const FragmentBounds &b) {
  if (k < 0) throw std::invalid_argument("sphere: negative k");
  if (p.height() > k + 1)
    throw std::invalid_argument("sphere: height of " + p.str() + " exceeds k+1 = " +
                                std::to_string(k + 1));
  ArityRef A = intern_arity(p);
  const std::string tag = "S" + p.str() + "," + std::to_string(k);
  auto layer = std::make_shared<Layer>();
  layer->k = k;
  layer->explicit_only = true;
  Term bs = nullptr, bt = nullptr;
  for (int d = 0; d < k; ++d) {
    GenRef s = intern_sphere_cell(tag + ".s" + std::to_string(d), d, A, bs, bt);
    GenRef t = intern_sphere_cell(tag + ".t" + std::to_string(d), d, A, bs, bt);
    layer->add(s);
    layer->add(t);
    bs = generic_term(s);
    bt = generic_term(t);
  }
  GenRef f = intern_sphere_cell(tag + ".f", k, A, bs, bt);
  GenRef g = intern_sphere_cell(tag + ".g", k, A, bs, bt);
  layer->add(f);
  layer->add(g);
  layer->materialized = true;
  layer->status = TruncStatus::Fixpoint;
  layer->iterations = 1;
  return {Theory::base(Mode::Weak, b)->with_layer(layer), f, g};
}

DiskData disk(const Table &p, int k, const FragmentBounds &b) {
  SphereData S = sphere(p, k, b);
  ArityRef A = intern_arity(p);
  auto layer = std::make_shared<Layer>();
  layer->k = k;
  layer->explicit_only = true;
  GenRef delta = intern_lift(k, 0, Flavor::Free, A, generic_term(S.f), generic_term(S.g));
  layer->add(delta);
  layer->materialized = true;
  layer->status = TruncStatus::Fixpoint;
  layer->iterations = 1;
  return {S.theory->with_layer(layer), S.f, S.g, delta};
}

Morphism::Ptr sphere_disk_inclusion(const Table &p, int k, const FragmentBounds &b) {
  DiskData D = disk(p, k, b);
  return inclusion_morphism(D.theory->prefix(1), D.theory,
                            "j" + p.str() + "," + std::to_string(k));
}

std::vector<std::pair<Table, int>> generating_family(int k, const FragmentBounds &b) {
  std::vector<std::pair<Table, int>> out;
  if (k > b.max_dim) return out;
  for (const Table &t : tables_up_to(b.max_arity_length, b.arity_height_cap(k)))
    out.emplace_back(t, k);
  return out;
}

std::vector<AdmissiblePair> admissible_pairs(const Theory &T, int k) { return T.pairs(k); }

namespace {

void check_flavor(const Theory &T, Flavor flavor) {
  if (flavor != flavor_for(T.mode()))
    throw std::invalid_argument("flavor " + flavor_name(flavor) + " does not match " +
                                mode_name(T.mode()) + " mode");
}

// Class counts of the union-find saturation over the low-depth terms of the
// dimensions a strict layer touches.
std::vector<std::size_t> saturation_rounds(const Theory &T, int k) {
  std::vector<Term> universe;
  for (ArityRef p : T.pair_arities(k))
    for (int m : {k, k + 1})
      for (Term t : T.terms(p, m, 1, T.bounds().size_cap())) universe.push_back(t);
  return saturate(universe, 32).class_counts;
}

ExtensionResult finish(Theory::Ptr T, Theory::Ptr R, std::size_t before, const std::string &eta) {
  ExtensionResult r;
  r.theory = R;
  const std::size_t top = R->num_layers() - 1;
  r.added = R->layer_generators(top).size() - before;
  auto L = R->layer_ptr(top);
  r.status = L->status;
  r.iterations = L->iterations;
  if (R->mode() == Mode::Strict) {
    if (L->rounds.empty()) L->rounds = saturation_rounds(*R, L->k);
    r.rounds = L->rounds;
  }
  r.eta = inclusion_morphism(T, R, eta);
  return r;
}

} // namespace

ExtensionResult extend_one_step(Theory::Ptr T, int k, Flavor flavor) {
  check_flavor(*T, flavor);
  const std::string eta = "eta^" + std::to_string(k);
  if (T->num_layers() > 0) {
    const std::size_t top = T->num_layers() - 1;
    const Layer &L = T->layer(top);
    if (!L.explicit_only && L.k == k && L.flavor == flavor) {
      std::size_t before = T->layer_generators(top).size();
      auto next = std::make_shared<Layer>();
      next->k = k;
      next->copy = L.copy;
      next->flavor = flavor;
      next->iteration_cap = L.iterations + 1;
      return finish(T, T->parent()->with_layer(next, false), before, eta);
    }
  }
  auto layer = std::make_shared<Layer>();
  layer->k = k;
  layer->flavor = flavor;
  layer->iteration_cap = 1;
  return finish(T, T->with_layer(layer), 0, eta);
}

ExtensionResult fibrant_replace(Theory::Ptr T, int k, Flavor flavor) {
  check_flavor(*T, flavor);
  return finish(T, T->extend(k), 0, "eta^" + std::to_string(k));
}

std::string tower_kind_name(TowerKind k) {
  switch (k) {
  case TowerKind::FC: return "fc";
  case TowerKind::IC: return "ic";
  default: return "strict";
  }
}

TowerKind parse_tower_kind(const std::string &s) {
  if (s == "fc") return TowerKind::FC;
  if (s == "ic") return TowerKind::IC;
  if (s == "strict") return TowerKind::Strict;
  throw std::invalid_argument("unknown tower mode '" + s + "' (expected fc, ic or strict)");
}

std::string StageReport::str() const {
  std::ostringstream os;
  os << "stage=" << stage << " k=" << (k < 0 ? std::string("all") : std::to_string(k))
     << " new-generators=" << new_generators << " status=" << status_name(status)
     << " iterations=" << iterations;
  if (!rounds.empty()) {
    os << " saturation-rounds=";
    for (std::size_t i = 0; i < rounds.size(); ++i) os << (i ? "," : "") << rounds[i];
  }
  return os.str();
}

namespace {

Theory::Ptr fc_stage(Theory::Ptr prev) {
  auto layer = std::make_shared<Layer>();
  layer->explicit_only = true;
  layer->flavor = Flavor::Free;
  for (int k = 0; k <= prev->bounds().max_dim; ++k)
    for (const auto &pr : prev->pairs(k)) {
      GenRef d = intern_lift(k, 0, Flavor::Free, pr.arity, pr.f, pr.g);
      if (!prev->contains(d)) layer->add(d);
    }
  layer->materialized = true;
  layer->iterations = 1;
  layer->status = layer->gens.empty() ? TruncStatus::Fixpoint : TruncStatus::Bound;
  return prev->with_layer(layer);
}

} // namespace

Tower build_tower(TowerKind kind, int n_stages, const FragmentBounds &b) {
  b.validate();
  if (n_stages < 0 || n_stages > b.max_dim)
    throw std::invalid_argument("stages (" + std::to_string(n_stages) +
                                ") must not exceed max-dim (" + std::to_string(b.max_dim) + ")");
  Tower tw;
  tw.kind = kind;
  tw.bounds = b;
  tw.stages.push_back(Theory::base(tw.mode(), b));
  for (int s = 1; s <= n_stages; ++s) {
    Theory::Ptr prev = tw.stages.back();
    StageReport rep;
    rep.stage = s;
    if (kind == TowerKind::FC) {
      Theory::Ptr next = fc_stage(prev);
      const Layer &L = next->layer(next->num_layers() - 1);
      rep.new_generators = L.gens.size();
      rep.status = L.status;
      rep.iterations = L.iterations;
      tw.inclusions.push_back(inclusion_morphism(prev, next, "J" + std::to_string(s - 1)));
      tw.stages.push_back(next);
    } else {
      ExtensionResult r = fibrant_replace(prev, s - 1, flavor_for(tw.mode()));
      rep.k = s - 1;
      rep.new_generators = r.added;
      rep.status = r.status;
      rep.iterations = r.iterations;
      rep.rounds = r.rounds;
      tw.inclusions.push_back(r.eta);
      tw.stages.push_back(r.theory);
    }
    tw.reports.push_back(rep);
  }
  return tw;
}

Term lookup_lift(const Theory &T, const AdmissiblePair &pair) {
  if (T.mode() == Mode::Strict) {
    for (Term t : T.terms(pair.arity, pair.dim + 1))
      if (T.equal(src_of(t), pair.f) && T.equal(tgt_of(t), pair.g)) return t;
  } else {
    for (std::size_t i = 0; i < T.num_layers(); ++i) {
      const Layer &L = T.layer(i);
      if (L.explicit_only) {
        GenRef d = intern_lift(pair.dim, 0, Flavor::Free, pair.arity, pair.f, pair.g);
        if (L.members.count(d)) return generic_term(d);
      } else if (L.k == pair.dim) {
        GenRef d = intern_lift(L.k, L.copy, L.flavor, pair.arity, pair.f, pair.g);
        if (T.layer_of(d) == static_cast<int>(i)) return generic_term(d);
      }
    }
  }
  throw BoundExhaustion("no lift of " + pair.str() + " within the truncation of " + T.word());
}

int stable_dim(const Tower &tower, int stage) {
  if (stage < 0 || stage >= static_cast<int>(tower.stages.size()))
    throw std::out_of_range("stage out of range");
  return tower.kind == TowerKind::FC ? 1 : stage + 1;
}

Morphism::Ptr quotient_morphism(Theory::Ptr weak, Theory::Ptr strict) {
  if (weak->num_layers() != strict->num_layers())
    throw MorphismError("quotient needs theories with the same layer word");
  for (std::size_t i = 0; i < weak->num_layers(); ++i)
    if (weak->layer(i).explicit_only || strict->layer(i).explicit_only ||
        weak->layer(i).k != strict->layer(i).k)
      throw MorphismError("quotient needs theories with the same layer word");
  const Theory *W = weak.get();
  const Theory *S = strict.get();
  auto self = std::make_shared<const Morphism *>(nullptr);
  auto q = std::make_shared<const Morphism>(
      weak, strict,
      [W, S, self](GenRef g) -> Term {
        int li = W->layer_of(g);
        if (li < 0) throw UndeclaredGenerator("undeclared generator " + g->name());
        const Morphism &F = **self;
        return lift_in_layer(*S, li, g->arity, F.apply(g->src), F.apply(g->tgt));
      },
      "quotient");
  *self = q.get();
  return q;
}

} // namespace globth
