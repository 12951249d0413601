#include "globth/verify.hpp"

#include <map>
#include <set>
#include <sstream>

namespace globth {

Theory::Ptr apply_word(Theory::Ptr T, const std::vector<int> &ks) {
  for (int k : ks) T = T->extend(k);
  return T;
}

std::vector<int> range_word(int n) {
  std::vector<int> ks;
  for (int i = 0; i < n; ++i) ks.push_back(i);
  return ks;
}

Morphism::Ptr eta_map(Theory::Ptr T, int k) {
  return inclusion_morphism(T, T->extend(k), "eta^" + std::to_string(k));
}

Morphism::Ptr apply_R(int k, Morphism::Ptr F) {
  Theory::Ptr S = F->source->extend(k), D = F->target->extend(k);
  const std::size_t layer = F->target->num_layers();
  const Theory *dst = D.get();
  auto base = compose(inclusion_morphism(F->target, D, "eta^" + std::to_string(k)), F);
  return extend_by_universal_property(
      S, D, base,
      [dst, layer](ArityRef p, Term f, Term g) { return lift_in_layer(*dst, layer, p, f, g); },
      "R_" + std::to_string(k) + "(" + F->name + ")");
}

Morphism::Ptr apply_word_map(const std::vector<int> &ks, Morphism::Ptr F) {
  for (int k : ks) F = apply_R(k, F);
  return F;
}

Morphism::Ptr build_mu(Theory::Ptr T, int k) {
  Theory::Ptr R = T->extend(k), RR = R->extend(k);
  const std::size_t layer = T->num_layers();
  const Theory *dst = R.get();
  return extend_by_universal_property(
      RR, R, identity_morphism(R),
      [dst, layer](ArityRef p, Term f, Term g) { return lift_in_layer(*dst, layer, p, f, g); },
      "mu^" + std::to_string(k));
}

Morphism::Ptr build_lambda(Theory::Ptr T, int i, int j) {
  if (!(i < j)) throw std::invalid_argument("lambda^{i,j} needs i < j");
  Theory::Ptr S = T->extend(j)->extend(i);
  Theory::Ptr D = T->extend(i)->extend(j);
  auto base = apply_R(j, eta_map(T, i));
  const std::size_t layer = T->num_layers(); // the R_i layer of R_j R_i T
  const Theory *dst = D.get();
  return extend_by_universal_property(
      S, D, base,
      [dst, layer](ArityRef p, Term f, Term g) { return lift_in_layer(*dst, layer, p, f, g); },
      "lambda^{" + std::to_string(i) + "," + std::to_string(j) + "}");
}

Theory::Ptr hat(Theory::Ptr T, int N) { return apply_word(T, range_word(N)); }

Morphism::Ptr build_mu_hat(Theory::Ptr T, int N, int n) {
  if (n < 0 || n > N) throw std::invalid_argument("mu_hat_n needs 0 <= n <= N");
  Theory::Ptr H = hat(T, N);
  if (n == 0) {
    return std::make_shared<const Morphism>(
        H, H, [](GenRef g) { return generic_term(g); }, "muhat_0");
  }
  auto prev = build_mu_hat(T, N, n - 1);
  Theory::Ptr S = prev->source->extend(n - 1);
  const std::size_t layer = T->num_layers() + n - 1; // layer k = n-1 of R̂T
  const Theory *dst = H.get();
  return extend_by_universal_property(
      S, H, prev,
      [dst, layer](ArityRef p, Term f, Term g) { return lift_in_layer(*dst, layer, p, f, g); },
      "muhat_" + std::to_string(n));
}

namespace {

// B R X -> R B X for B = R_{m-1} ... R_0 and R = R_r (m <= r).
Morphism::Ptr distribute(Theory::Ptr X, int m, int r) {
  Morphism::Ptr acc;
  for (int l = 0; l < m; ++l) {
    Theory::Ptr Y = apply_word(X, range_word(l));
    std::vector<int> outer;
    for (int q = l + 1; q < m; ++q) outer.push_back(q);
    auto step = apply_word_map(outer, build_lambda(Y, l, r));
    acc = acc ? compose(step, acc) : step;
  }
  if (!acc) {
    Theory::Ptr S = X->extend(r);
    acc = identity_morphism(S);
  }
  return acc;
}

} // namespace

Morphism::Ptr build_composite_mu(Theory::Ptr T, int n) {
  if (n == 0) return identity_morphism(T);
  const int m = n - 1, r = n - 1;
  Theory::Ptr BT = apply_word(T, range_word(m));
  auto swap = apply_R(r, distribute(BT, m, r));                 // R B R BT -> R R B BT
  auto inner = apply_R(r, apply_R(r, build_composite_mu(T, m))); // R R B B T -> R R B T
  auto mult = build_mu(BT, r);                                   // R R B T -> R B T
  auto M = compose(mult, compose(inner, swap));
  return std::make_shared<const Morphism>(
      M->source, M->target, [M](GenRef g) { return M->on_generator(g); },
      "M_" + std::to_string(n));
}

std::string law_name(Law l) {
  switch (l) {
  case Law::UnitTriangleLeft: return "unit-triangle-left";
  case Law::UnitTriangleRight: return "unit-triangle-right";
  case Law::Naturality: return "naturality";
  case Law::PentagonOuter: return "pentagon-outer";
  case Law::PentagonInner: return "pentagon-inner";
  case Law::YangBaxter: return "yang-baxter";
  case Law::MonadUnitLeft: return "monad-unit-left";
  case Law::MonadUnitRight: return "monad-unit-right";
  case Law::MonadAssoc: return "monad-assoc";
  case Law::MuHatUnitLeft: return "mu-hat-unit-left";
  case Law::MuHatUnitRight: return "mu-hat-unit-right";
  case Law::MuHatAssoc: return "mu-hat-assoc";
  case Law::Completability: return "completability";
  default: return "mu-hat-uniqueness";
  }
}

Law parse_law(const std::string &s) {
  for (int i = 0; i <= static_cast<int>(Law::MuHatUniqueness); ++i)
    if (law_name(static_cast<Law>(i)) == s) return static_cast<Law>(i);
  throw std::invalid_argument("unknown law '" + s + "'");
}

std::vector<Law> law_family(const std::string &family) {
  if (family == "unit-triangle") return {Law::UnitTriangleLeft, Law::UnitTriangleRight};
  if (family == "pentagons") return {Law::PentagonOuter, Law::PentagonInner};
  if (family == "monad") return {Law::MonadUnitLeft, Law::MonadUnitRight, Law::MonadAssoc};
  if (family == "mu-hat") return {Law::MuHatUnitLeft, Law::MuHatUnitRight, Law::MuHatAssoc};
  return {parse_law(family)};
}

std::size_t LawCheckReport::failures() const {
  std::size_t n = 0;
  for (const auto &v : verdicts) n += !v.ok;
  return n;
}

std::string LawCheckReport::str(bool verbose) const {
  std::ostringstream os;
  os << "law " << law;
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : " params=") << params[i];
  os << " mode=" << mode_name(mode) << "\n";
  os << "bounds " << bounds.str() << "\n";
  for (const auto &t : truncation) os << "truncation " << t << "\n";
  for (const auto &m : morphism_checks) os << "morphism " << m << "\n";
  if (!error.empty()) os << "error " << error << "\n";
  os << "verdicts checked=" << verdicts.size() << " failed=" << failures() << "\n";
  for (const auto &v : verdicts) {
    if (v.ok && !verbose) continue;
    os << (v.ok ? "PASS " : "FAIL ") << v.generator;
    if (!v.provenance.empty()) os << " pair=" << v.provenance;
    if (!v.ok) os << " lhs=" << v.lhs << " rhs=" << v.rhs;
    os << "\n";
  }
  os << "result " << (!conclusive ? "INCONCLUSIVE" : pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

struct Sides {
  Morphism::Ptr lhs, rhs;
  std::vector<Morphism::Ptr> parts;
};

void add_truncation(LawCheckReport &r, std::set<std::string> &seen, const Theory &T) {
  if (!seen.insert(T.word()).second) return;
  for (std::size_t i = 0; i < T.num_layers(); ++i) {
    T.layer_generators(i);
    const Layer &L = T.layer(i);
    std::ostringstream os;
    os << "theory=" << T.word() << " layer=" << i << " k=" << L.k
       << " status=" << status_name(L.status) << " iterations=" << L.iterations
       << " generators=" << L.gens.size();
    r.truncation.push_back(os.str());
  }
}

std::string provenance(GenRef g) {
  if (!g->src) return g->label;
  return g->arity->text + " (" + term_str(g->src) + ", " + term_str(g->tgt) + ")";
}

void evaluate(LawCheckReport &r, const Sides &s) {
  const auto gens = s.lhs->source->generators();
  for (const auto &part : s.parts) {
    auto c = check_morphism(*part, part->source->generators());
    r.morphism_checks.push_back(part->name + " " + (c.ok ? "ok" : "FAIL") +
                                " generators=" + std::to_string(c.checked) +
                                (c.ok ? "" : " " + c.message));
    if (!c.ok) r.pass = false;
  }
  for (const auto &side : {s.lhs, s.rhs}) {
    auto c = check_morphism(*side, gens);
    r.morphism_checks.push_back(side->name + " " + (c.ok ? "ok" : "FAIL") +
                                " generators=" + std::to_string(c.checked) +
                                (c.ok ? "" : " " + c.message));
    if (!c.ok) r.pass = false;
  }
  const Theory &D = *s.lhs->target;
  for (GenRef g : gens) {
    Verdict v;
    v.generator = g->name();
    Term a = s.lhs->on_generator(g), b = s.rhs->on_generator(g);
    v.ok = D.equal(a, b);
    if (!v.ok) {
      v.lhs = term_str(a);
      v.rhs = term_str(b);
      v.provenance = provenance(g);
      r.pass = false;
    }
    r.verdicts.push_back(std::move(v));
  }
  std::set<std::string> seen;
  add_truncation(r, seen, *s.lhs->source);
  add_truncation(r, seen, *s.lhs->target);
  for (const auto &part : s.parts) {
    add_truncation(r, seen, *part->source);
    add_truncation(r, seen, *part->target);
  }
}

void need(const std::vector<int> &p, std::size_t n, const std::string &what) {
  if (p.size() != n)
    throw std::invalid_argument(what + " takes " + std::to_string(n) + " index parameters");
}

Sides law_sides(Law law, const std::vector<int> &p, Theory::Ptr T) {
  switch (law) {
  case Law::UnitTriangleLeft: {
    need(p, 2, "unit triangle");
    int i = p[0], j = p[1];
    auto lam = build_lambda(T, i, j);
    auto eta = eta_map(T->extend(j), i);
    auto rj = apply_R(j, eta_map(T, i));
    return {compose(lam, eta), rj, {lam, eta, rj}};
  }
  case Law::UnitTriangleRight: {
    need(p, 2, "unit triangle");
    int i = p[0], j = p[1];
    auto lam = build_lambda(T, i, j);
    auto ri = apply_R(i, eta_map(T, j));
    auto eta = eta_map(T->extend(i), j);
    return {compose(lam, ri), eta, {lam, ri, eta}};
  }
  case Law::Naturality: {
    need(p, 3, "naturality");
    int i = p[0], j = p[1], m = p[2];
    auto F = eta_map(T, m);
    auto lamT = build_lambda(T, i, j);
    auto lamT2 = build_lambda(T->extend(m), i, j);
    auto left = apply_R(i, apply_R(j, F));
    auto right = apply_R(j, apply_R(i, F));
    return {compose(lamT2, left), compose(right, lamT), {lamT, lamT2, left, right}};
  }
  case Law::PentagonOuter: {
    need(p, 2, "pentagon");
    int i = p[0], j = p[1];
    auto lam = build_lambda(T, i, j);
    auto mu = build_mu(T->extend(j), i);
    auto ri_lam = apply_R(i, lam);
    auto lam_ri = build_lambda(T->extend(i), i, j);
    auto rj_mu = apply_R(j, build_mu(T, i));
    return {compose(lam, mu), compose(rj_mu, compose(lam_ri, ri_lam)),
            {lam, mu, ri_lam, lam_ri, rj_mu}};
  }
  case Law::PentagonInner: {
    need(p, 2, "pentagon");
    int i = p[0], j = p[1];
    auto lam = build_lambda(T, i, j);
    auto ri_mu = apply_R(i, build_mu(T, j));
    auto lam_rj = build_lambda(T->extend(j), i, j);
    auto rj_lam = apply_R(j, lam);
    auto mu = build_mu(T->extend(i), j);
    return {compose(lam, ri_mu), compose(mu, compose(rj_lam, lam_rj)),
            {lam, ri_mu, lam_rj, rj_lam, mu}};
  }
  case Law::YangBaxter: {
    need(p, 3, "yang-baxter");
    int i = p[0], j = p[1], k = p[2];
    if (!(i < j && j < k)) throw std::invalid_argument("yang-baxter needs i < j < k");
    auto a1 = build_lambda(T->extend(k), i, j);   // R_iR_jR_kT -> R_jR_iR_kT
    auto a2 = apply_R(j, build_lambda(T, i, k));  // -> R_jR_kR_iT
    auto a3 = build_lambda(T->extend(i), j, k);   // -> R_kR_jR_iT
    auto b1 = apply_R(i, build_lambda(T, j, k));  // R_iR_jR_kT -> R_iR_kR_jT
    auto b2 = build_lambda(T->extend(j), i, k);   // -> R_kR_iR_jT
    auto b3 = apply_R(k, build_lambda(T, i, j));  // -> R_kR_jR_iT
    return {compose(a3, compose(a2, a1)), compose(b3, compose(b2, b1)), {a1, a2, a3, b1, b2, b3}};
  }
  case Law::MonadUnitLeft: {
    need(p, 1, "monad law");
    int k = p[0];
    auto mu = build_mu(T, k);
    auto eta = eta_map(T->extend(k), k);
    return {compose(mu, eta), identity_morphism(T->extend(k)), {mu, eta}};
  }
  case Law::MonadUnitRight: {
    need(p, 1, "monad law");
    int k = p[0];
    auto mu = build_mu(T, k);
    auto rk = apply_R(k, eta_map(T, k));
    return {compose(mu, rk), identity_morphism(T->extend(k)), {mu, rk}};
  }
  case Law::MonadAssoc: {
    need(p, 1, "monad law");
    int k = p[0];
    auto mu = build_mu(T, k);
    auto mu_r = build_mu(T->extend(k), k);
    auto r_mu = apply_R(k, mu);
    return {compose(mu, mu_r), compose(mu, r_mu), {mu, mu_r, r_mu}};
  }
  case Law::MuHatUnitLeft: {
    need(p, 1, "mu-hat law");
    int N = p[0];
    Theory::Ptr H = hat(T, N);
    auto mh = build_mu_hat(T, N, N);
    auto eta = inclusion_morphism(H, hat(H, N), "etahat");
    return {compose(mh, eta), identity_morphism(H), {mh, eta}};
  }
  case Law::MuHatUnitRight: {
    need(p, 1, "mu-hat law");
    int N = p[0];
    Theory::Ptr H = hat(T, N);
    auto mh = build_mu_hat(T, N, N);
    auto r_eta = apply_word_map(range_word(N), inclusion_morphism(T, H, "etahat"));
    return {compose(mh, r_eta), identity_morphism(H), {mh, r_eta}};
  }
  case Law::MuHatAssoc: {
    need(p, 1, "mu-hat law");
    int N = p[0];
    Theory::Ptr H = hat(T, N);
    auto mh = build_mu_hat(T, N, N);
    auto mh_h = build_mu_hat(H, N, N);
    auto r_mh = apply_word_map(range_word(N), mh);
    return {compose(mh, mh_h), compose(mh, r_mh), {mh, mh_h, r_mh}};
  }
  case Law::Completability: {
    need(p, 2, "completability");
    int n = p[0], N = p[1];
    if (n > N) throw std::invalid_argument("completability needs n <= N");
    Theory::Ptr H = hat(T, N);
    Theory::Ptr AT = apply_word(T, range_word(n));
    auto kappa_T = inclusion_morphism(AT, H, "kappa_" + std::to_string(n));
    auto a_kappa = apply_word_map(range_word(n), kappa_T);        // A A T -> A R̂T
    auto kappa_H = inclusion_morphism(a_kappa->target, hat(H, N),
                                      "kappa_" + std::to_string(n)); // A R̂T -> R̂R̂T
    auto mh = build_mu_hat(T, N, N);
    auto M = build_composite_mu(T, n);
    return {compose(mh, compose(kappa_H, a_kappa)), compose(kappa_T, M),
            {a_kappa, kappa_H, mh, M, kappa_T}};
  }
  default: throw std::invalid_argument("law has no two-sided form");
  }
}

// Every candidate lift of each outer pair agrees in R̂T.
void uniqueness(LawCheckReport &r, Theory::Ptr T, int N) {
  Theory::Ptr H = hat(T, N);
  Theory::Ptr S = H->extend(0);
  auto mh = build_mu_hat(T, N, 1);
  auto c = check_morphism(*mh, S->generators());
  r.morphism_checks.push_back(mh->name + " " + (c.ok ? "ok" : "FAIL") +
                              " generators=" + std::to_string(c.checked) +
                              (c.ok ? "" : " " + c.message));
  if (!c.ok) r.pass = false;
  for (GenRef g : S->layer_generators(S->num_layers() - 1)) {
    Verdict v;
    v.generator = g->name();
    Term f = mh->apply(g->src), h = mh->apply(g->tgt);
    std::vector<Term> cands;
    for (Term t : H->terms(g->arity, g->dim()))
      if (H->equal(src_of(t), f) && H->equal(tgt_of(t), h)) cands.push_back(t);
    if (cands.empty()) {
      v.ok = false;
      v.lhs = "no lift";
      v.rhs = "-";
    }
    for (Term t : cands)
      if (!H->equal(t, cands.front())) {
        v.ok = false;
        v.lhs = term_str(cands.front());
        v.rhs = term_str(t);
        break;
      }
    if (!v.ok) {
      v.provenance = provenance(g);
      r.pass = false;
    }
    r.verdicts.push_back(std::move(v));
  }
  std::set<std::string> seen;
  add_truncation(r, seen, *S);
}

} // namespace

LawCheckReport verify_law(Law law, const std::vector<int> &params, Theory::Ptr T) {
  LawCheckReport r;
  r.law = law_name(law);
  r.params = params;
  r.mode = T->mode();
  r.bounds = T->bounds();
  try {
    if (law == Law::MuHatUniqueness) {
      need(params, 1, "mu-hat uniqueness");
      uniqueness(r, T, params[0]);
    } else {
      evaluate(r, law_sides(law, params, T));
    }
  } catch (const std::invalid_argument &) {
    throw;
  } catch (const std::exception &e) {
    r.error = e.what();
    r.pass = false;
  }
  return r;
}

} // namespace globth
