#include "globth/oracle.hpp"

#include <map>
#include <set>

namespace globth {

namespace {

void require_low(const Table &p) {
  if (p.height() > 1)
    throw std::invalid_argument("strict oracle covers height <= 1 only, got " + p.str());
}

void require_tree(const PastingDiagram &pd) {
  const int nv = pd.cells(0), ne = pd.cells(1);
  if (ne != nv - 1) throw std::logic_error("1-skeleton is not a tree");
  std::vector<int> parent(nv);
  for (int v = 0; v < nv; ++v) parent[v] = v;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int e = 0; e < ne; ++e) {
    int a = find(pd.src[1][e]), b = find(pd.tgt[1][e]);
    if (a == b) throw std::logic_error("1-skeleton has a cycle");
    parent[a] = b;
  }
}

// Level 1 cells are ordered vertex pairs; level m+1 cells are parallel pairs
// of level m cells. Each cell is stored as (src, tgt) ids of the level below.
std::vector<std::vector<std::pair<int, int>>> levels(const Table &p, int n) {
  PastingDiagram pd = realize(p);
  require_tree(pd);
  const int nv = pd.cells(0);
  std::vector<std::vector<std::pair<int, int>>> L(n + 1);
  for (int v = 0; v < nv; ++v) L[0].push_back({v, v});
  if (n >= 1)
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) L[1].push_back({a, b});
  for (int m = 1; m < n; ++m) {
    const auto &cur = L[m];
    for (int x = 0; x < static_cast<int>(cur.size()); ++x)
      for (int y = 0; y < static_cast<int>(cur.size()); ++y)
        if (cur[x] == cur[y]) L[m + 1].push_back({x, y});
  }
  return L;
}

} // namespace

int word_end(const PastingDiagram &pd, const OracleWord &w) {
  int at = w.start;
  if (at < 0 || at >= pd.cells(0)) throw NonComposableWord("start vertex out of range");
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    int l = w.letters[i];
    int e = std::abs(l) - 1;
    if (l == 0 || e >= pd.cells(1)) throw NonComposableWord("unknown edge letter");
    int from = l > 0 ? pd.src[1][e] : pd.tgt[1][e];
    int to = l > 0 ? pd.tgt[1][e] : pd.src[1][e];
    if (from != at)
      throw NonComposableWord("letter " + std::to_string(i) + " starts at vertex " +
                              std::to_string(from) + ", word is at " + std::to_string(at));
    at = to;
  }
  return at;
}

OracleWord strict_reduce_word(const Table &p, const OracleWord &w) {
  require_low(p);
  PastingDiagram pd = realize(p);
  word_end(pd, w);
  OracleWord r{w.start, {}};
  for (int l : w.letters) {
    if (!r.letters.empty() && r.letters.back() == -l) r.letters.pop_back();
    else r.letters.push_back(l);
  }
  return r;
}

OracleWord reduce_in_order(const OracleWord &w, const std::vector<unsigned> &picks) {
  OracleWord r = w;
  std::size_t next = 0;
  while (true) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i + 1 < r.letters.size(); ++i)
      if (r.letters[i] == -r.letters[i + 1]) spots.push_back(i);
    if (spots.empty()) return r;
    unsigned pick = next < picks.size() ? picks[next++] : 0;
    std::size_t i = spots[pick % spots.size()];
    r.letters.erase(r.letters.begin() + i, r.letters.begin() + i + 2);
  }
}

StrictHomTable strict_hom_table(const Table &p, int n) {
  require_low(p);
  StrictHomTable t{p, {}, {}};
  auto L = levels(p, n);
  for (const auto &lv : L) t.counts.push_back(lv.size());
  // Unique reduced word per ordered vertex pair: the tree path.
  PastingDiagram pd = realize(p);
  const int nv = pd.cells(0);
  for (int a = 0; a < nv; ++a) {
    std::vector<OracleWord> to(nv);
    std::vector<char> seen(nv, 0);
    std::vector<int> queue{a};
    seen[a] = 1;
    to[a] = OracleWord{a, {}};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      int v = queue[h];
      for (int e = 0; e < pd.cells(1); ++e)
        for (int sign : {1, -1}) {
          int from = sign > 0 ? pd.src[1][e] : pd.tgt[1][e];
          int dest = sign > 0 ? pd.tgt[1][e] : pd.src[1][e];
          if (from != v || seen[dest]) continue;
          seen[dest] = 1;
          to[dest] = to[v];
          to[dest].letters.push_back(sign * (e + 1));
          queue.push_back(dest);
        }
    }
    for (int b = 0; b < nv; ++b) t.one_cells.push_back(to[b]);
  }
  return t;
}

std::size_t strict_hom_count(const Table &p, int n) {
  require_low(p);
  return levels(p, n)[n].size();
}

std::pair<std::size_t, std::size_t> parallel_pair_counts(const Table &p, int m) {
  require_low(p);
  auto L = levels(p, m);
  const auto &cur = L[m];
  if (m == 0) {
    // every pair of 0-cells is admissible
    return {cur.size() * cur.size(), cur.size() * cur.size()};
  }
  std::map<std::pair<int, int>, std::size_t> tally;
  for (const auto &c : cur) ++tally[c];
  std::size_t by_tally = 0;
  for (const auto &[key, count] : tally) by_tally += count * count;
  std::size_t direct = 0;
  for (const auto &x : cur)
    for (const auto &y : cur) direct += x == y;
  return {by_tally, direct};
}

LawCheckReport crosscheck_strict(const Tower &tower, const Table &p, int n) {
  require_low(p);
  if (tower.kind != TowerKind::Strict) throw std::invalid_argument("crosscheck needs a strict tower");
  const int last = static_cast<int>(tower.stages.size()) - 1;
  if (n >= stable_dim(tower, last))
    throw std::invalid_argument("dimension " + std::to_string(n) +
                                " is not below the stable dimension of the last stage");
  const Theory &T = *tower.stages.back();
  LawCheckReport r;
  r.law = "strict-crosscheck";
  r.params = {n};
  r.mode = Mode::Strict;
  r.bounds = tower.bounds;
  for (const auto &rep : tower.reports) r.truncation.push_back(rep.str());
  ArityRef A = intern_arity(p);
  const int D = tower.bounds.max_depth, S = tower.bounds.size_cap();
  auto classes = [&](int depth) {
    std::set<std::string> keys;
    for (Term t : T.terms(A, n, depth, S)) keys.insert(strict_key(t));
    return keys.size();
  };
  const std::size_t at_d = classes(D);
  const std::size_t below = D > 0 ? classes(D - 1) : 0;
  const bool converged = D > 0 && at_d == below;
  r.truncation.push_back("convergence arity=" + p.str() + " dim=" + std::to_string(n) +
                         " depth=" + std::to_string(D) + " classes=" + std::to_string(at_d) +
                         " depth=" + std::to_string(D - 1) + " classes=" + std::to_string(below) +
                         " status=" + (converged ? "converged" : "not-converged"));
  if (!converged) {
    r.error = "non-converged fragment";
    r.conclusive = false;
    return r;
  }
  const std::size_t oracle = strict_hom_count(p, n);
  const auto &universe = T.terms(A, n, D, S);
  Saturation sat = saturate(universe, 64);
  std::set<int> reps;
  for (Term t : universe) reps.insert(sat.find(t));
  std::string rounds;
  for (std::size_t i = 0; i < sat.class_counts.size(); ++i)
    rounds += (i ? "," : "") + std::to_string(sat.class_counts[i]);
  r.truncation.push_back("saturation rounds=" + rounds +
                         (sat.converged ? " status=fixpoint" : " status=bound"));
  auto verdict = [&](const std::string &what, std::size_t got) {
    Verdict v;
    v.generator = what + "=" + std::to_string(got) + " oracle=" + std::to_string(oracle);
    v.ok = got == oracle;
    if (!v.ok) {
      v.lhs = std::to_string(got);
      v.rhs = std::to_string(oracle);
      r.pass = false;
    }
    r.verdicts.push_back(v);
  };
  verdict("key-classes", at_d);
  verdict("saturation-classes", reps.size());
  return r;
}

} // namespace globth
