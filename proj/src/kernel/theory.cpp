#include "globth/theory.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace globth {

void FragmentBounds::validate() const {
  if (max_arity_length < 1) throw std::invalid_argument("max_arity_length must be >= 1");
  if (max_dim < 0 || max_depth < 0) throw std::invalid_argument("negative bound");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::string FragmentBounds::str() const {
  std::ostringstream os;
  os << "max-arity-len=" << max_arity_length << " max-dim=" << max_dim
     << " max-depth=" << max_depth << " max-iter=" << max_iterations << " max-size=" << max_size
     << " max-arity-height=" << max_arity_height;
  return os.str();
}

std::string mode_name(Mode m) { return m == Mode::Weak ? "weak" : "strict"; }

std::string status_name(TruncStatus s) {
  switch (s) {
  case TruncStatus::Fixpoint: return "fixpoint";
  case TruncStatus::Bound: return "bound";
  default: return "lazy";
  }
}

std::string AdmissiblePair::str() const {
  return arity->text + " k=" + std::to_string(dim) + " (" + term_str(f) + ", " + term_str(g) + ")";
}

// ---------------------------------------------------------------------------
// strict keys

namespace {

std::vector<int> tree_path(ArityRef q, int a, int b) {
  const PastingDiagram &pd = q->pd;
  int nv = pd.cells(0);
  std::vector<int> via(nv, 0), prev(nv, -1);
  std::vector<char> seen(nv, 0);
  std::deque<int> queue{a};
  seen[a] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e = 0; e < pd.cells(1); ++e) {
      int w = -1, step = 0;
      if (pd.src[1][e] == v) w = pd.tgt[1][e], step = e + 1;
      else if (pd.tgt[1][e] == v) w = pd.src[1][e], step = -(e + 1);
      if (w < 0 || seen[w]) continue;
      seen[w] = 1;
      prev[w] = v;
      via[w] = step;
      queue.push_back(w);
    }
  }
  if (!seen[b]) throw std::logic_error("disconnected 1-skeleton in " + q->text);
  std::vector<int> path;
  for (int v = b; v != a; v = prev[v]) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

void append_reduced(Word &w, const Word &x) {
  if (w.end != x.start) throw std::logic_error("non-composable words");
  for (int l : x.letters) {
    if (!w.letters.empty() && w.letters.back() == -l) w.letters.pop_back();
    else w.letters.push_back(l);
  }
  w.end = x.end;
}

Word inverse(const Word &x) {
  Word r{x.end, x.start, {}};
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

std::unordered_map<Term, Word> &word_memo() {
  static std::unordered_map<Term, Word> m;
  return m;
}

} // namespace

std::string Word::str() const {
  std::string s = std::to_string(start) + ":";
  for (int l : letters) s += (l > 0 ? "+" : "-") + std::to_string(std::abs(l) - 1);
  return s + ":" + std::to_string(end);
}

Word term_word(Term t) {
  if (t->dim != 1) throw std::invalid_argument("term_word needs a 1-dimensional term");
  auto &memo = word_memo();
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Word w;
  if (!t->is_gen) {
    const PastingDiagram &pd = t->arity->pd;
    w = Word{pd.src[1][t->cell], pd.tgt[1][t->cell], {t->cell + 1}};
  } else {
    GenRef g = t->gen;
    if (g->kind != GenKind::Lift || g->k != 0 || g->src->is_gen || g->tgt->is_gen)
      throw std::invalid_argument("no groupoid word for " + term_str(t));
    ArityRef q = g->arity;
    std::vector<int> path = tree_path(q, g->src->cell, g->tgt->cell);
    Term v = cell_image(q, 0, g->src->cell, t->args);
    w = Word{v->cell, v->cell, {}};
    for (int step : path) {
      int e = std::abs(step) - 1;
      Word x = term_word(cell_image(q, 1, e, t->args));
      append_reduced(w, step > 0 ? x : inverse(x));
    }
  }
  memo.emplace(t, w);
  return w;
}

const std::string &strict_key(Term t) {
  static std::unordered_map<Term, std::string> memo;
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  std::string k;
  bool exotic = t->is_gen && t->gen->kind != GenKind::Lift;
  if (exotic) {
    k = "x" + hex64(t->hash);
  } else if (t->dim == 0) {
    k = "v" + std::to_string(t->cell);
  } else if (t->dim == 1) {
    k = "w" + term_word(t).str();
  } else if (t->arity->table.height() <= t->dim) {
    k = "P(" + strict_key(src_of(t)) + "|" + strict_key(tgt_of(t)) + ")";
  } else if (!t->is_gen) {
    k = "b" + std::to_string(t->dim) + "." + std::to_string(t->cell);
  } else {
    k = "G(" + strict_key(generic_term(t->gen)) + ";";
    for (std::size_t i = 0; i < t->args.size(); ++i) k += (i ? "," : "") + strict_key(t->args[i]);
    k += ")";
  }
  return memo.emplace(t, std::move(k)).first->second;
}

namespace {

uint64_t strict_class_id(Term t) {
  static std::unordered_map<Term, uint64_t> memo;
  static std::unordered_map<std::string, uint64_t> ids;
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  const std::string &k = strict_key(t);
  auto jt = ids.find(k);
  uint64_t id = jt == ids.end() ? ids.emplace(k, ids.size() + 1).first->second : jt->second;
  memo.emplace(t, id);
  return id;
}

uint64_t class_id(Mode mode, Term t) {
  return mode == Mode::Weak ? reinterpret_cast<uint64_t>(t) : strict_class_id(t);
}

} // namespace

// ---------------------------------------------------------------------------
// Theory

Theory::Theory(Mode mode, FragmentBounds b, Ptr parent, std::shared_ptr<Layer> layer)
    : mode_(mode), bounds_(b), parent_(std::move(parent)), layer_(std::move(layer)),
      depth_(parent_ ? parent_->depth_ + 1 : 0) {}

Theory::Ptr Theory::base(Mode mode, const FragmentBounds &b) {
  b.validate();
  return std::make_shared<const Theory>(mode, b, nullptr, nullptr);
}

Theory::Ptr Theory::extend(int k) const {
  auto it = children_.find(k);
  if (it != children_.end())
    if (auto p = it->second.lock()) return p;
  auto layer = std::make_shared<Layer>();
  layer->k = k;
  layer->flavor = flavor_for(mode_);
  auto child = with_layer(layer);
  children_[k] = child;
  return child;
}

Theory::Ptr Theory::with_layer(std::shared_ptr<Layer> layer, bool assign_copy) const {
  if (assign_copy && layer->k >= 0 && !layer->explicit_only) layer->copy = count_layers_with_k(layer->k);
  return std::make_shared<const Theory>(mode_, bounds_, shared_from_this(), std::move(layer));
}

const Layer &Theory::layer(std::size_t i) const { return *layer_ptr(i); }

std::shared_ptr<Layer> Theory::layer_ptr(std::size_t i) const {
  if (i >= depth_) throw std::out_of_range("layer index out of range");
  const Theory *node = this;
  while (node->depth_ > i + 1) node = node->parent_.get();
  return node->layer_;
}

Theory::Ptr Theory::prefix(std::size_t n) const {
  if (n > depth_) throw std::out_of_range("prefix longer than theory");
  const Theory *node = this;
  while (node->depth_ > n) node = node->parent_.get();
  return node->shared_from_this();
}

std::string Theory::word() const {
  std::string s;
  for (std::size_t i = depth_; i-- > 0;) {
    const Layer &L = layer(i);
    if (L.explicit_only) s += "E" + std::to_string(i);
    else s += (L.flavor == Flavor::Free ? "R_" : "S_") + std::to_string(L.k);
  }
  return s + "T";
}

int Theory::count_layers_with_k(int k) const {
  int n = 0;
  for (std::size_t i = 0; i < depth_; ++i) {
    const Layer &L = layer(i);
    if (!L.explicit_only && L.k == k) ++n;
  }
  return n;
}

bool Theory::lift_admissible(GenRef g) const {
  const int k = g->k;
  ArityRef p = g->arity;
  if (k > bounds_.max_dim || p->table.length() > bounds_.max_arity_length ||
      p->table.height() > bounds_.arity_height_cap(k))
    return false;
  for (Term x : {g->src, g->tgt})
    if (x->depth > bounds_.max_depth || x->size > bounds_.size_cap() || !valid_term(x)) return false;
  if (k >= 1 && !(equal(src_of(g->src), src_of(g->tgt)) && equal(tgt_of(g->src), tgt_of(g->tgt))))
    return false;
  return true;
}

int Theory::layer_of(GenRef g) const {
  auto it = layer_memo_.find(g);
  if (it != layer_memo_.end()) return it->second;
  int found = -1;
  for (std::size_t i = 0; i < depth_ && found < 0; ++i) {
    const Layer &L = layer(i);
    if (L.explicit_only || L.materialized) {
      if (L.members.count(g)) {
        found = static_cast<int>(i);
        break;
      }
      if (L.explicit_only) continue;
    }
    if (g->kind == GenKind::Lift && L.k == g->k && L.copy == g->copy && L.flavor == g->flavor) {
      if (prefix(i)->lift_admissible(g)) found = static_cast<int>(i);
      break;
    }
  }
  layer_memo_.emplace(g, found);
  return found;
}

bool Theory::valid_term(Term t) const {
  if (!t->is_gen) return true;
  if (valid_memo_.count(t)) return true;
  GenRef g = t->gen;
  if (layer_of(g) < 0) return false;
  ArityRef q = g->arity;
  if (static_cast<int>(t->args.size()) != q->table.peaks()) return false;
  for (int j = 0; j < q->table.peaks(); ++j) {
    Term a = t->args[j];
    if (a->arity != t->arity || a->dim != q->table.peak(j) || !valid_term(a)) return false;
    if (j > 0) {
      int v = q->table.valley(j - 1);
      Term left = iter_boundary(t->args[j - 1], q->table.peak(j - 1) - v, 0);
      Term right = iter_boundary(a, q->table.peak(j) - v, 1);
      if (!equal(left, right)) return false;
    }
  }
  valid_memo_.insert(t);
  return true;
}

void Theory::require_term(Term t) const {
  if (valid_term(t)) return;
  std::vector<GenRef> gs;
  collect_generators(t, gs);
  for (GenRef g : gs)
    if (layer_of(g) < 0) throw UndeclaredGenerator("undeclared generator " + g->name());
  throw std::invalid_argument("ill-formed term " + term_str(t));
}

bool Theory::equal(Term a, Term b) const {
  if (a == b) return true;
  if (mode_ == Mode::Weak || a->arity != b->arity || a->dim != b->dim) return false;
  return strict_key(a) == strict_key(b);
}

const std::string &Theory::key(Term t) const { return strict_key(t); }

std::string Theory::pair_key(ArityRef p, Term f, Term g) const {
  if (mode_ == Mode::Weak) return p->text + "|" + hex64(f->hash) + "|" + hex64(g->hash);
  return p->text + "|" + strict_key(f) + "|" + strict_key(g);
}

const std::vector<GenRef> &Theory::layer_generators(std::size_t i) const {
  if (!layer(i).materialized) materialize(i);
  return layer(i).gens;
}

std::vector<GenRef> Theory::generators() const {
  std::vector<GenRef> out;
  for (std::size_t i = 0; i < depth_; ++i) {
    const auto &gs = layer_generators(i);
    out.insert(out.end(), gs.begin(), gs.end());
  }
  return out;
}

const std::map<ArityRef, std::vector<GenRef>> &Theory::generators_of_dim(int m) const {
  auto it = by_dim_.find(m);
  if (it != by_dim_.end()) return it->second;
  std::map<ArityRef, std::vector<GenRef>> idx;
  for (std::size_t i = 0; i < depth_; ++i) {
    const Layer &L = layer(i);
    if (!L.explicit_only && L.k + 1 != m) continue;
    for (GenRef g : layer_generators(i))
      if (g->dim() == m) idx[g->arity].push_back(g);
  }
  return by_dim_.emplace(m, std::move(idx)).first->second;
}

namespace {

struct PairOrder {
  bool operator()(const AdmissiblePair &a, const AdmissiblePair &b) const {
    if (a.arity != b.arity) return table_less(a.arity->table, b.arity->table);
    int c = term_compare(a.f, b.f);
    if (c) return c < 0;
    return term_compare(a.g, b.g) < 0;
  }
};

} // namespace

void Theory::materialize(std::size_t i) const {
  auto L = layer_ptr(i);
  if (L->materialized) return;
  if (L->explicit_only) {
    L->materialized = true;
    return;
  }
  Ptr P = prefix(i), Ti = prefix(i + 1);
  std::unordered_set<std::string> lifted;
  for (GenRef g : L->gens) lifted.insert(pair_key(g->arity, g->src, g->tgt));
  L->status = TruncStatus::Bound;
  const int cap = L->iteration_cap > 0 ? L->iteration_cap : bounds_.max_iterations;
  for (int it = 1; it <= cap; ++it) {
    auto ps = (it == 1 ? P : Ti)->pairs(L->k);
    std::size_t added = 0;
    for (const auto &pr : ps) {
      if (!lifted.insert(pair_key(pr.arity, pr.f, pr.g)).second) continue;
      L->add(intern_lift(L->k, L->copy, L->flavor, pr.arity, pr.f, pr.g));
      ++added;
    }
    L->iterations = it;
    if (it == 1) L->materialized = true;
    if (added == 0) {
      L->status = TruncStatus::Fixpoint;
      break;
    }
  }
  std::stable_sort(L->gens.begin(), L->gens.end(), [](GenRef a, GenRef b) {
    return PairOrder{}({a->arity, a->k, a->src, a->tgt}, {b->arity, b->k, b->src, b->tgt});
  });
}

std::vector<ArityRef> Theory::pair_arities(int k) const {
  std::vector<ArityRef> out;
  if (k < 0 || k > bounds_.max_dim) return out;
  for (const Table &t : tables_up_to(bounds_.max_arity_length, bounds_.arity_height_cap(k)))
    out.push_back(intern_arity(t));
  return out;
}

std::vector<AdmissiblePair> Theory::pairs(int k) const {
  std::vector<AdmissiblePair> out;
  for (ArityRef p : pair_arities(k)) {
    const auto &ts = terms(p, k);
    std::vector<Term> reps;
    if (mode_ == Mode::Weak) {
      reps = ts;
    } else {
      std::unordered_set<uint64_t> seen;
      for (Term t : ts)
        if (seen.insert(class_id(mode_, t)).second) reps.push_back(t);
    }
    if (k == 0) {
      for (Term f : reps)
        for (Term g : reps) out.push_back({p, k, f, g});
      continue;
    }
    std::map<std::pair<uint64_t, uint64_t>, std::vector<Term>> groups;
    std::vector<std::pair<uint64_t, uint64_t>> keys;
    for (Term t : reps) {
      std::pair<uint64_t, uint64_t> key{class_id(mode_, src_of(t)), class_id(mode_, tgt_of(t))};
      groups[key].push_back(t);
      keys.push_back(key);
    }
    for (std::size_t a = 0; a < reps.size(); ++a)
      for (Term g : groups[keys[a]]) out.push_back({p, k, reps[a], g});
  }
  return out;
}

const std::vector<Term> &Theory::terms(ArityRef p, int m) const {
  return terms(p, m, bounds_.max_depth, bounds_.size_cap());
}

const std::vector<Term> &Theory::terms(ArityRef p, int m, int depth, int size) const {
  auto key = std::make_tuple(p, m, depth, size);
  auto it = term_memo_.find(key);
  if (it != term_memo_.end()) return it->second;
  std::vector<Term> out = base_terms(p, m);
  if (depth >= 1 && size >= 1) {
    for (const auto &[q, gens] : generators_of_dim(m)) {
      const int np = q->table.peaks();
      std::vector<const std::vector<Term> *> cands(np);
      for (int j = 0; j < np; ++j) cands[j] = &terms(p, q->table.peak(j), depth - 1, size - 1);
      // index components j >= 1 by the class of their target boundary at the valley
      std::vector<std::unordered_map<uint64_t, std::vector<Term>>> index(np);
      for (int j = 1; j < np; ++j) {
        int steps = q->table.peak(j) - q->table.valley(j - 1);
        for (Term c : *cands[j]) index[j][class_id(mode_, iter_boundary(c, steps, 1))].push_back(c);
      }
      std::vector<Term> comps(np);
      std::function<void(int, int)> rec = [&](int j, int budget) {
        if (j == np) {
          for (GenRef g : gens) out.push_back(gen_term(g, p, comps));
          return;
        }
        const std::vector<Term> *list = cands[0];
        if (j > 0) {
          int steps = q->table.peak(j - 1) - q->table.valley(j - 1);
          auto f = index[j].find(class_id(mode_, iter_boundary(comps[j - 1], steps, 0)));
          if (f == index[j].end()) return;
          list = &f->second;
        }
        for (Term c : *list) {
          if (c->size > budget) continue;
          comps[j] = c;
          rec(j + 1, budget - c->size);
        }
      };
      rec(0, size - 1);
    }
  }
  std::sort(out.begin(), out.end(), term_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return term_memo_.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// tuples, normal forms

std::vector<Term> mk_tuple(const Theory &T, ArityRef source, ArityRef target,
                           const std::vector<Term> &components) {
  const Table &q = target->table;
  if (static_cast<int>(components.size()) != q.peaks())
    throw TupleError("tuple into " + target->text + " needs " + std::to_string(q.peaks()) +
                         " components, got " + std::to_string(components.size()),
                     -1);
  for (int j = 0; j < q.peaks(); ++j) {
    Term c = components[j];
    if (c->arity != source || c->dim != q.peak(j))
      throw TupleError("component " + std::to_string(j) + " must be a " +
                           std::to_string(q.peak(j)) + "-term over " + source->text,
                       -1);
    T.require_term(c);
  }
  for (int v = 0; v + 1 < q.peaks(); ++v) {
    Term left = iter_boundary(components[v], q.peak(v) - q.valley(v), 0);
    Term right = iter_boundary(components[v + 1], q.peak(v + 1) - q.valley(v), 1);
    if (!T.equal(left, right))
      throw TupleError("valley " + std::to_string(v) + ": source side " + term_str(left) +
                           " of component " + std::to_string(v) + " differs from target side " +
                           term_str(right) + " of component " + std::to_string(v + 1),
                       v);
  }
  return components;
}

Term mk_gen(const Theory &T, GenRef g, ArityRef source, const std::vector<Term> &components) {
  if (!T.contains(g)) throw UndeclaredGenerator("undeclared generator " + g->name());
  return gen_term(g, source, mk_tuple(T, source, g->arity, components));
}

Term normalize(const Theory &T, Term t) {
  T.require_term(t);
  return t;
}

std::pair<Term, Term> boundary(const Theory &T, Term t) {
  if (t->dim == 0) throw std::invalid_argument("boundary of a 0-dimensional term");
  T.require_term(t);
  return {src_of(t), tgt_of(t)};
}

std::vector<Term> enumerate_terms(const Theory &T, ArityRef p, int m, int depth) {
  return T.terms(p, m, depth, T.bounds().size_cap());
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct TermParser {
  const std::string &s;
  std::size_t pos = 0;
  ArityRef p;
  const Theory *T;
  int line, col0;
  int rewrites = 0;

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(msg, line, col0 + static_cast<int>(pos) + 1);
  }
  void skip() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }
  void expect(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool lit(const char *w) {
    skip();
    std::size_t n = std::char_traits<char>::length(w);
    if (s.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }
  int number() {
    skip();
    std::size_t st = pos;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (st == pos) fail("expected a natural number");
    return std::stoi(s.substr(st, pos - st));
  }
  Term term() {
    skip();
    std::size_t start = pos;
    if (lit("cell(")) {
      int d = number();
      expect(',');
      int i = number();
      expect(')');
      if (i >= p->pd.cells(d)) {
        pos = start;
        fail("no cell(" + std::to_string(d) + "," + std::to_string(i) + ") in " + p->text);
      }
      return base_term(p, d, i);
    }
    if (lit("s(") || lit("t(")) {
      bool is_src = s[pos - 2] == 's';
      Term inner = term();
      expect(')');
      if (inner->dim == 0) {
        pos = start;
        fail("boundary of a 0-dimensional term");
      }
      ++rewrites;
      return is_src ? src_of(inner) : tgt_of(inner);
    }
    if (lit("g#")) {
      std::size_t st = pos;
      while (pos < s.size() && isxdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos - st != 16) fail("expected 16 hex digits after g#");
      std::string hex = s.substr(st, 16);
      GenRef g = find_generator(std::stoull(hex, nullptr, 16));
      if (!g || (T && !T->contains(g))) {
        pos = start;
        fail("unknown generator g#" + hex);
      }
      expect('[');
      std::vector<Term> args;
      args.push_back(term());
      while (true) {
        skip();
        if (pos < s.size() && s[pos] == ';') {
          ++pos;
          args.push_back(term());
        } else {
          break;
        }
      }
      expect(']');
      try {
        if (T) return gen_term(g, p, mk_tuple(*T, p, g->arity, args));
        if (static_cast<int>(args.size()) != g->arity->table.peaks())
          throw TupleError("wrong number of components", -1);
        return gen_term(g, p, args);
      } catch (const std::exception &e) {
        pos = start;
        fail(e.what());
      }
    }
    fail("expected cell(, g#, s( or t(");
  }
};

} // namespace

ParsedTerm parse_term(const std::string &text, ArityRef p, const Theory *T, int line,
                      int column_offset) {
  TermParser tp{text, 0, p, T, line, column_offset};
  Term t = tp.term();
  tp.skip();
  if (tp.pos != text.size()) tp.fail("trailing input");
  return {t, tp.rewrites};
}

// ---------------------------------------------------------------------------
// saturation

int Saturation::find(Term t) const {
  auto it = index.find(t);
  return it == index.end() ? -1 : rep[it->second];
}

Saturation saturate(std::vector<Term> universe, int max_rounds) {
  Saturation S;
  std::unordered_map<Term, int> index;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    Term t = universe[i];
    if (index.emplace(t, static_cast<int>(S.universe.size())).second) S.universe.push_back(t);
    if (t->dim >= 1)
      for (Term b : {src_of(t), tgt_of(t)})
        if (!index.count(b)) universe.push_back(b);
  }
  const int n = static_cast<int>(S.universe.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  };
  auto count = [&]() {
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) c += find(i) == i;
    return c;
  };
  S.class_counts.push_back(count());
  for (int round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    std::map<std::tuple<ArityRef, int, int, int>, int> lifts;
    for (int i = 0; i < n; ++i) {
      Term t = S.universe[i];
      if (t->dim == 0 || t->arity->table.height() > t->dim) continue;
      auto key = std::make_tuple(t->arity, t->dim, find(index[src_of(t)]), find(index[tgt_of(t)]));
      auto [it, fresh] = lifts.emplace(key, i);
      if (!fresh) changed |= unite(it->second, i);
    }
    std::map<std::pair<GenRef, std::vector<int>>, int> apps;
    for (int i = 0; i < n; ++i) {
      Term t = S.universe[i];
      if (!t->is_gen) continue;
      std::vector<int> args;
      bool complete = true;
      for (Term a : t->args) {
        auto f = index.find(a);
        if (f == index.end()) {
          complete = false;
          break;
        }
        args.push_back(find(f->second));
      }
      if (!complete) continue;
      auto [it, fresh] = apps.emplace(std::make_pair(t->gen, args), i);
      if (!fresh) changed |= unite(it->second, i);
    }
    S.class_counts.push_back(count());
    if (!changed) {
      S.converged = true;
      break;
    }
  }
  S.rep.resize(n);
  for (int i = 0; i < n; ++i) S.rep[i] = find(i);
  S.index = std::move(index);
  return S;
}

// ---------------------------------------------------------------------------
// morphisms

Morphism::Morphism(Theory::Ptr source, Theory::Ptr target, Rule rule, std::string name)
    : source(std::move(source)), target(std::move(target)), name(std::move(name)),
      rule_(std::move(rule)) {}

Term Morphism::on_generator(GenRef g) const {
  auto it = gen_memo_.find(g);
  if (it != gen_memo_.end()) return it->second;
  Term r = rule_(g);
  gen_memo_.emplace(g, r);
  return r;
}

Term Morphism::apply(Term t) const {
  if (!t->is_gen) return t;
  auto it = term_memo_.find(t);
  if (it != term_memo_.end()) return it->second;
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (Term a : t->args) args.push_back(apply(a));
  Term r = substitute(on_generator(t->gen), args, t->arity);
  term_memo_.emplace(t, r);
  return r;
}

Morphism::Ptr identity_morphism(Theory::Ptr T) {
  return std::make_shared<const Morphism>(T, T, [](GenRef g) { return generic_term(g); }, "id");
}

Morphism::Ptr inclusion_morphism(Theory::Ptr A, Theory::Ptr B, std::string name) {
  const Theory *target = B.get();
  return std::make_shared<const Morphism>(
      A, B,
      [target](GenRef g) {
        if (!target->contains(g))
          throw MorphismError("inclusion: " + g->name() + " is not a generator of " +
                              target->word());
        return generic_term(g);
      },
      std::move(name));
}

Morphism::Ptr compose(Morphism::Ptr g, Morphism::Ptr f) {
  const Morphism *G = g.get();
  const Morphism *F = f.get();
  auto keep = std::make_shared<std::pair<Morphism::Ptr, Morphism::Ptr>>(g, f);
  return std::make_shared<const Morphism>(
      f->source, g->target,
      [G, F, keep](GenRef x) { return G->apply(F->on_generator(x)); }, g->name + " o " + f->name);
}

Morphism::Ptr extend_by_universal_property(Theory::Ptr T, Theory::Ptr D, Morphism::Ptr base,
                                           LiftChoice choice, std::string name) {
  if (T->num_layers() == 0) throw MorphismError("extension needs at least one layer");
  const std::size_t top = T->num_layers() - 1;
  const Theory *src = T.get();
  const Theory *dst = D.get();
  auto keep = base;
  return std::make_shared<const Morphism>(
      T, D,
      [src, dst, top, keep, choice](GenRef g) -> Term {
        int li = src->layer_of(g);
        if (li < 0) throw UndeclaredGenerator("undeclared generator " + g->name());
        if (static_cast<std::size_t>(li) < top) return keep->on_generator(g);
        Term f = keep->apply(g->src), h = keep->apply(g->tgt);
        Term r = choice(g->arity, f, h);
        if (r->arity != g->arity || r->dim != g->dim())
          throw MorphismError("lift choice for " + g->name() + " has the wrong shape");
        if (!dst->equal(src_of(r), f))
          throw MorphismError("lift choice over " + g->arity->text + " violates s(lift) = " +
                              term_str(f) + ", got " + term_str(src_of(r)));
        if (!dst->equal(tgt_of(r), h))
          throw MorphismError("lift choice over " + g->arity->text + " violates t(lift) = " +
                              term_str(h) + ", got " + term_str(tgt_of(r)));
        return r;
      },
      std::move(name));
}

Term lift_in_layer(const Theory &D, std::size_t layer_index, ArityRef p, Term f, Term g) {
  const Layer &L = D.layer(layer_index);
  if (L.explicit_only || L.k != f->dim)
    throw MorphismError("layer " + std::to_string(layer_index) + " does not lift " +
                        std::to_string(f->dim) + "-pairs");
  GenRef d = intern_lift(L.k, L.copy, L.flavor, p, f, g);
  if (D.layer_of(d) == static_cast<int>(layer_index)) return generic_term(d);
  const FragmentBounds &b = D.bounds();
  bool out_of_bounds = p->table.length() > b.max_arity_length || L.k > b.max_dim ||
                       p->table.height() > b.arity_height_cap(L.k) || f->depth > b.max_depth ||
                       g->depth > b.max_depth || f->size > b.size_cap() || g->size > b.size_cap();
  std::string what = "pair " + p->text + " (" + term_str(f) + ", " + term_str(g) + ")";
  if (out_of_bounds) throw BoundExhaustion("no lift within bounds for " + what);
  throw MorphismError("not an admissible " + what + " in layer " + std::to_string(layer_index));
}

MorphismCheck check_morphism(const Morphism &F, const std::vector<GenRef> &gens) {
  MorphismCheck r;
  for (GenRef g : gens) {
    ++r.checked;
    try {
      Term img = F.on_generator(g);
      if (img->arity != g->arity || img->dim != g->dim())
        throw MorphismError("image has the wrong arity or dimension");
      if (!F.target->valid_term(img))
        throw MorphismError("image " + term_str(img) + " is not a term of " + F.target->word());
      if (g->dim() >= 1) {
        Term fs = F.apply(g->src), ft = F.apply(g->tgt);
        if (!F.target->equal(src_of(img), fs))
          throw MorphismError("source not preserved: " + term_str(src_of(img)) + " vs " +
                              term_str(fs));
        if (!F.target->equal(tgt_of(img), ft))
          throw MorphismError("target not preserved: " + term_str(tgt_of(img)) + " vs " +
                              term_str(ft));
      }
    } catch (const std::exception &e) {
      r.ok = false;
      r.message = F.name + " on " + g->name() + ": " + e.what();
      return r;
    }
  }
  return r;
}

} // namespace globth
