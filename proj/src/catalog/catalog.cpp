#include "globth/catalog.hpp"

#include <map>

namespace globth {

std::string CatalogEntry::label_column() const {
  if (labels.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? "," : "") + labels[i].label;
  return s;
}

std::string CatalogEntry::convention_column() const {
  if (labels.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) s += (i ? ";" : "") + labels[i].conventions;
  return s;
}

std::string CatalogEntry::tsv() const {
  return label_column() + "\t" + convention_column() + "\t" + std::to_string(stage) + "\t" +
         gen->arity->text + "\t" + term_str(gen->src) + "\t" + term_str(gen->tgt) + "\t" +
         gen->name();
}

namespace {

// c∘(x, y) under a slot convention; nullptr when the tuple is ill-typed.
Term compose_slots(const Theory &T, Term c, ArityRef P, Term x, Term y, bool reversed) {
  std::vector<Term> args = reversed ? std::vector<Term>{y, x} : std::vector<Term>{x, y};
  if (!x || !y) return nullptr;
  try {
    mk_tuple(T, P, c->arity, args);
  } catch (const TupleError &) {
    return nullptr;
  }
  return substitute(c, args, P);
}

} // namespace

std::vector<NamedPair> named_pairs(const Tower &tower) {
  std::vector<NamedPair> out;
  if (tower.stages.size() < 2) return out;
  const Theory &S1 = *tower.stages[1];
  ArityRef P0 = intern_arity("(0)"), P1 = intern_arity("(1)"), P2 = intern_arity("(1,0,1)"),
           P3 = intern_arity("(1,0,1,0,1)");
  AdmissiblePair z{P0, 0, base_term(P0, 0, 0), base_term(P0, 0, 0)};
  AdmissiblePair c{P2, 0, base_term(P2, 0, 2), base_term(P2, 0, 1)};
  AdmissiblePair w{P1, 0, base_term(P1, 0, 1), base_term(P1, 0, 0)};
  out.push_back({"Z", "A,B", z});
  out.push_back({"c", "A,B", c});
  out.push_back({"ω", "A,B", w});
  if (tower.stages.size() < 3) return out;
  const Theory &S2 = *tower.stages[2];
  Term zt, ct;
  try {
    zt = lookup_lift(S1, z);
    ct = lookup_lift(S1, c);
  } catch (const BoundExhaustion &) {
    return out;
  }
  for (bool rev : {false, true}) {
    const std::string conv = rev ? "B" : "A";
    auto eps = [&](int i) {
      int peak = rev ? 2 - i : i;
      return base_term(P3, 1, P3->pd.peak_top[peak]);
    };
    auto cc = [&](Term x, Term y) { return compose_slots(S2, ct, P3, x, y, rev); };
    Term lhs = cc(cc(eps(0), eps(1)), eps(2));
    Term rhs = cc(eps(0), cc(eps(1), eps(2)));
    if (lhs && rhs) out.push_back({"a", conv, {P3, 1, lhs, rhs}});
    Term e = base_term(P1, 1, 0);
    Term z_t = substitute(zt, {base_term(P1, 0, P1->pd.tgt[1][0])}, P1);
    Term z_s = substitute(zt, {base_term(P1, 0, P1->pd.src[1][0])}, P1);
    Term left = compose_slots(S2, ct, P1, z_t, e, rev);
    Term right = compose_slots(S2, ct, P1, e, z_s, rev);
    if (left) out.push_back({"Z_l", conv, {P1, 1, left, e}});
    if (right) out.push_back({"Z_r", conv, {P1, 1, right, e}});
  }
  return out;
}

std::vector<CatalogEntry> identify_cells(const Tower &tower) {
  std::vector<CatalogEntry> out;
  const auto named = named_pairs(tower);
  for (std::size_t s = 1; s < tower.stages.size(); ++s) {
    const Theory &T = *tower.stages[s];
    for (GenRef g : T.layer_generators(T.num_layers() - 1)) {
      CatalogEntry e{{}, static_cast<int>(s), g};
      if (g->kind == GenKind::Lift) {
        std::map<std::string, std::string> hits;
        std::vector<std::string> order;
        for (const auto &np : named) {
          if (np.pair.dim != g->k || np.pair.arity != g->arity) continue;
          if (!T.equal(g->src, np.pair.f) || !T.equal(g->tgt, np.pair.g)) continue;
          auto [it, fresh] = hits.emplace(np.label, np.convention);
          if (fresh) order.push_back(np.label);
          else if (it->second != np.convention) it->second = "A,B";
        }
        for (const auto &l : order) e.labels.push_back({l, hits[l]});
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string catalog_tsv(const std::vector<CatalogEntry> &entries, bool named_only) {
  std::string s = "label\tconvention\tstage\tarity\tsrc\ttgt\tid\n";
  for (const auto &e : entries)
    if (!named_only || !e.labels.empty()) s += e.tsv() + "\n";
  return s;
}

} // namespace globth
