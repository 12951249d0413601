// One line per acceptance criterion; exit status 1 when any criterion fails.
#include "globth/catalog.hpp"
#include "support.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace globth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Every report produced along the way, for the truncation audit.
std::vector<std::string> g_reports;

FragmentBounds make_bounds(int len, int dim, int depth, int size) {
  FragmentBounds b;
  b.max_arity_length = len;
  b.max_dim = dim;
  b.max_depth = depth;
  b.max_size = size;
  b.max_arity_height = 1;
  return b;
}

void record(const Tower &tw) {
  for (const auto &r : tw.reports) g_reports.push_back(r.str());
}

std::string run_cli(const std::string &args, int &status) {
  FILE *p = popen((std::string(GLOBTH_CLI) + " " + args + " 2>&1").c_str(), "r");
  if (!p) throw std::runtime_error("cannot start " + std::string(GLOBTH_CLI));
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome theta_combinatorics() {
  Outcome o;
  std::vector<Table> ts;
  for (const Table &t : tables_up_to(7, 4))
    if (realize(t).total_cells() <= 5) ts.push_back(t);
  std::size_t pairs = 0;
  for (const Table &p : ts)
    for (const Table &q : ts) {
      ++pairs;
      std::size_t got = theta_hom(p, q).size(), want = testsupport::brute_force_hom(p, q);
      if (got != want) {
        o.ok = false;
        o.detail += " " + p.str() + "->" + q.str() + " got " + std::to_string(got) + " want " +
                    std::to_string(want);
      }
    }
  auto size = [](const char *a, const char *b) {
    return theta_hom(parse_table(a), parse_table(b)).size();
  };
  std::size_t s1 = size("(1)", "(1)"), s2 = size("(0)", "(1)"), s3 = size("(1,0,1)", "(1)");
  o.ok = o.ok && s1 == 1 && s2 == 2 && s3 == 0;
  o.detail = std::to_string(pairs) + " table pairs match brute force; |(1),(1)|=" +
             std::to_string(s1) + " |(0),(1)|=" + std::to_string(s2) +
             " |(1,0,1),(1)|=" + std::to_string(s3) + o.detail;
  return o;
}

Outcome pair_census() {
  auto T = Theory::base(Mode::Weak, make_bounds(3, 2, 0, 2));
  auto ps = admissible_pairs(*T, 0);
  auto has = [&](const char *ar, int f, int g) {
    ArityRef p = intern_arity(std::string(ar));
    for (const auto &x : ps)
      if (x.arity == p && x.f == base_term(p, 0, f) && x.g == base_term(p, 0, g)) return true;
    return false;
  };
  bool z = has("(0)", 0, 0), c = has("(1,0,1)", 2, 1), w = has("(1)", 1, 0);
  return {ps.size() == 14 && z && c && w,
          std::to_string(ps.size()) + " pairs; Z " + (z ? "found" : "missing") + ", c " +
              (c ? "found" : "missing") + ", ω " + (w ? "found" : "missing")};
}

Outcome named_cell_catalog() {
  Tower tw = build_tower(TowerKind::IC, 2, make_bounds(5, 2, 2, 2));
  record(tw);
  auto entries = identify_cells(tw);
  std::map<std::string, std::vector<const CatalogEntry *>> named;
  for (const auto &e : entries)
    for (const auto &l : e.labels)
      if (l.conventions.find('A') != std::string::npos) named[l.label].push_back(&e);
  Outcome o;
  for (const char *l : {"Z", "c", "ω", "a", "Z_l", "Z_r"})
    if (named[l].size() != 1) {
      o.ok = false;
      o.detail += std::string(" missing ") + l;
    }
  if (!o.ok) return o;
  const Theory &S1 = *tw.stages[1];
  GenRef c = named["c"][0]->gen, Z = named["Z"][0]->gen;
  ArityRef P3 = intern_arity("(1,0,1,0,1)"), P1 = intern_arity("(1)");
  auto eps = [&](int i) { return base_term(P3, 1, P3->pd.peak_top[i]); };
  auto cc = [&](Term x, Term y) { return mk_gen(S1, c, P3, {x, y}); };
  Term c_c1 = cc(cc(eps(0), eps(1)), eps(2)), c_1c = cc(eps(0), cc(eps(1), eps(2)));
  Term e = base_term(P1, 1, 0);
  Term zt = substitute(generic_term(Z), {base_term(P1, 0, 1)}, P1);
  Term zs = substitute(generic_term(Z), {base_term(P1, 0, 0)}, P1);
  GenRef a = named["a"][0]->gen, zl = named["Z_l"][0]->gen, zr = named["Z_r"][0]->gen;
  bool ok_a = a->src == c_c1 && a->tgt == c_1c;
  bool ok_zl = zl->src == mk_gen(S1, c, P1, {zt, e}) && zl->tgt == e;
  bool ok_zr = zr->src == mk_gen(S1, c, P1, {e, zs}) && zr->tgt == e;
  o.ok = ok_a && ok_zl && ok_zr && named["Z"][0]->stage == 1 && named["a"][0]->stage == 2;
  o.detail = std::to_string(entries.size()) + " entries; a: c∘(c,1) -> c∘(1,c) " +
             (ok_a ? "exact" : "mismatch") + "; Z_l: c∘(Z∘t,1) -> 1 " +
             (ok_zl ? "exact" : "mismatch") + "; Z_r: c∘(1,Z∘s) -> 1 " +
             (ok_zr ? "exact" : "mismatch");
  return o;
}

struct Job {
  Law law;
  std::vector<int> params;
};

std::vector<Job> law_jobs() {
  std::vector<Job> jobs;
  for (int i = 0; i <= 2; ++i)
    for (int j = i + 1; j <= 2; ++j) {
      jobs.push_back({Law::UnitTriangleLeft, {i, j}});
      jobs.push_back({Law::UnitTriangleRight, {i, j}});
      for (int m = 0; m <= 2; ++m) jobs.push_back({Law::Naturality, {i, j, m}});
      jobs.push_back({Law::PentagonOuter, {i, j}});
      jobs.push_back({Law::PentagonInner, {i, j}});
    }
  jobs.push_back({Law::YangBaxter, {0, 1, 2}});
  for (int k = 0; k <= 2; ++k)
    for (Law l : {Law::MonadUnitLeft, Law::MonadUnitRight, Law::MonadAssoc}) jobs.push_back({l, {k}});
  for (Law l : {Law::MuHatUnitLeft, Law::MuHatUnitRight, Law::MuHatAssoc}) jobs.push_back({l, {2}});
  jobs.push_back({Law::Completability, {1, 2}});
  jobs.push_back({Law::Completability, {2, 2}});
  return jobs;
}

Outcome law_suite() {
  struct Config {
    std::string name;
    Theory::Ptr T;
  };
  std::vector<Config> configs = {
      {"weak base depth 2", Theory::base(Mode::Weak, make_bounds(3, 2, 2, 2))},
      {"weak stage-2 depth 1",
       Theory::base(Mode::Weak, make_bounds(3, 2, 1, 1))->extend(0)->extend(1)},
      {"strict stage-2 depth 2",
       Theory::base(Mode::Strict, make_bounds(3, 2, 2, 2))->extend(0)->extend(1)},
  };
  Outcome o;
  std::size_t checks = 0, verdicts = 0;
  for (const auto &cfg : configs) {
    std::vector<Job> jobs = law_jobs();
    if (cfg.T->mode() == Mode::Strict) jobs.push_back({Law::MuHatUniqueness, {2}});
    for (const Job &j : jobs) {
      LawCheckReport r = verify_law(j.law, j.params, cfg.T);
      g_reports.push_back(r.str());
      ++checks;
      verdicts += r.verdicts.size();
      bool morphisms_ok = true;
      for (const auto &m : r.morphism_checks) morphisms_ok = morphisms_ok && m.find(" ok ") != std::string::npos;
      if (!r.pass || !r.conclusive || !morphisms_ok) {
        o.ok = false;
        std::string ps;
        for (int p : j.params) ps += (ps.empty() ? "" : ",") + std::to_string(p);
        o.detail += " [" + cfg.name + ": " + law_name(j.law) + " " + ps + " failed=" +
                    std::to_string(r.failures()) + (r.error.empty() ? "" : " " + r.error) + "]";
      }
    }
  }
  o.detail = std::to_string(checks) + " law checks over 3 fragments, " + std::to_string(verdicts) +
             " generator verdicts" + o.detail;
  return o;
}

Outcome stabilization() {
  Outcome o;
  std::size_t compared = 0;
  for (TowerKind kind : {TowerKind::IC, TowerKind::Strict}) {
    Tower tw = build_tower(kind, 3, make_bounds(3, 3, 2, 2));
    record(tw);
    for (const char *tp : {"(0)", "(1)", "(1,0,1)"})
      for (int m = 0; m <= 2; ++m) {
        ArityRef p = intern_arity(std::string(tp));
        const auto &ref = tw.stages[m + 1]->terms(p, m);
        std::set<std::string> ref_classes;
        for (Term t : ref) ref_classes.insert(tw.stages[m + 1]->key(t));
        for (int s = m + 2; s <= 3; ++s) {
          ++compared;
          std::set<std::string> classes;
          for (Term t : tw.stages[s]->terms(p, m)) classes.insert(tw.stages[s]->key(t));
          if (tw.stages[s]->terms(p, m) != ref || classes != ref_classes) {
            o.ok = false;
            o.detail += std::string(" ") + tower_kind_name(kind) + " " + tp + " dim " +
                        std::to_string(m) + " stage " + std::to_string(s);
          }
        }
      }
  }
  o.detail = std::to_string(compared) + " (arity, dim, stage) hom sets compared against stage m+1" + o.detail;
  return o;
}

OracleWord as_oracle(const Word &w) { return OracleWord{w.start, w.letters}; }

Outcome strict_vs_weak() {
  Outcome o;
  std::vector<std::string> parts;
  bool expect[2] = {false, true}; // weak, strict
  int idx = 0;
  for (Mode mode : {Mode::Weak, Mode::Strict}) {
    Tower tw = build_tower(mode == Mode::Weak ? TowerKind::IC : TowerKind::Strict, 2,
                           make_bounds(3, 2, 2, 2));
    record(tw);
    const Theory &S = *tw.stages[2];
    ArityRef P0 = intern_arity("(0)"), P1 = intern_arity("(1)"), P2 = intern_arity("(1,0,1)"),
             P3 = intern_arity("(1,0,1,0,1)");
    Term Z = lookup_lift(S, {P0, 0, base_term(P0, 0, 0), base_term(P0, 0, 0)});
    Term c = lookup_lift(S, {P2, 0, base_term(P2, 0, 2), base_term(P2, 0, 1)});
    auto comp = [&](ArityRef P, Term x, Term y) { return substitute(c, {x, y}, P); };
    Term e = base_term(P1, 1, 0);
    Term unit = comp(P1, substitute(Z, {base_term(P1, 0, 1)}, P1), e);
    auto eps = [&](int i) { return base_term(P3, 1, P3->pd.peak_top[i]); };
    Term l = comp(P3, comp(P3, eps(0), eps(1)), eps(2)), r = comp(P3, eps(0), comp(P3, eps(1), eps(2)));
    bool u = S.equal(unit, e), a = S.equal(l, r);
    parts.push_back(std::string(mode_name(mode)) + ": unit " + (u ? "equal" : "distinct") +
                    ", assoc " + (a ? "equal" : "distinct"));
    o.ok = o.ok && u == expect[idx] && a == expect[idx];
    ++idx;
    if (mode == Mode::Strict) {
      // Word-reduction oracle: both sides reduce to the same groupoid word.
      bool ou = strict_reduce_word(P1->table, as_oracle(term_word(unit))) ==
                strict_reduce_word(P1->table, as_oracle(term_word(e)));
      bool oa = strict_reduce_word(P3->table, as_oracle(term_word(l))) ==
                strict_reduce_word(P3->table, as_oracle(term_word(r)));
      parts.push_back(std::string("word oracle: unit ") + (ou ? "agrees" : "disagrees") +
                      ", assoc " + (oa ? "agrees" : "disagrees"));
      o.ok = o.ok && ou && oa;
    }
  }
  for (const auto &p : parts) o.detail += (o.detail.empty() ? "" : "; ") + p;
  return o;
}

Outcome oracle_agreement() {
  Tower tw = build_tower(TowerKind::Strict, 2, make_bounds(3, 2, 2, 2));
  record(tw);
  struct Case {
    const char *arity;
    int n;
    std::size_t want;
  };
  Outcome o;
  for (Case c : {Case{"(1)", 1, 4}, Case{"(1,0,1)", 1, 9}, Case{"(1)", 2, 4}}) {
    Table p = parse_table(c.arity);
    LawCheckReport r = crosscheck_strict(tw, p, c.n);
    g_reports.push_back(r.str());
    std::size_t oracle = strict_hom_count(p, c.n);
    bool ok = r.pass && r.conclusive && oracle == c.want && r.verdicts.size() == 2;
    o.ok = o.ok && ok;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "(" + c.arity + "," +
                std::to_string(c.n) + ") oracle=" + std::to_string(oracle) + " " +
                (r.verdicts.empty() ? r.error : r.verdicts[0].generator) + " " +
                (ok ? "PASS" : "FAIL");
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  fs::path root = fs::temp_directory_path() / ("globth-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::string> commands = {
      "build --mode=ic --stages=2 --out=",   "build --mode=fc --stages=2 --out=",
      "build --mode=strict --stages=2 --out=", "catalog --mode=ic --stages=2 --max-arity-len=5",
      "verify --law=pentagons --indices=0,1 --max-depth=1 --max-size=1",
      "pairs --dim=1 --stage=1 --max-depth=1"};
  std::size_t compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outs[2];
    fs::path dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::string cmd = commands[i];
      if (cmd.back() == '=') {
        dirs[rep] = root / (std::to_string(i) + "-" + std::to_string(rep));
        cmd += dirs[rep].string();
      }
      int status = 0;
      outs[rep] = run_cli(cmd, status);
      if (status != 0) {
        o.ok = false;
        o.detail += " [" + commands[i] + " exit " + std::to_string(status) + "]";
      }
      if (cmd.rfind("build", 0) == 0 || cmd.rfind("verify", 0) == 0) g_reports.push_back(outs[rep]);
    }
    ++compared;
    if (outs[0] != outs[1]) {
      o.ok = false;
      o.detail += " [stdout differs: " + commands[i] + "]";
    }
    if (!dirs[0].empty())
      for (const auto &f : fs::directory_iterator(dirs[0])) {
        ++compared;
        if (slurp(f.path()) != slurp(dirs[1] / f.path().filename())) {
          o.ok = false;
          o.detail += " [file differs: " + f.path().filename().string() + "]";
        }
      }
  }
  fs::remove_all(root);
  o.detail = std::to_string(compared) + " outputs byte-identical across two runs" + o.detail;
  return o;
}

Outcome truncation_honesty() {
  Outcome o;
  std::size_t lines = 0;
  for (const std::string &rep : g_reports) {
    std::stringstream in(rep);
    std::string l;
    while (std::getline(in, l)) {
      bool stage_line = l.rfind("stage=", 0) == 0;
      bool trunc_line = l.rfind("truncation ", 0) == 0;
      if (!stage_line && !trunc_line) continue;
      ++lines;
      bool has = l.find("status=fixpoint") != std::string::npos ||
                 l.find("status=bound") != std::string::npos ||
                 l.find("status=converged") != std::string::npos ||
                 l.find("status=not-converged") != std::string::npos;
      if (!has) {
        o.ok = false;
        o.detail += " [" + l + "]";
      }
    }
  }
  o.ok = o.ok && lines > 0;
  o.detail = std::to_string(g_reports.size()) + " reports, " + std::to_string(lines) +
             " truncation lines, each with a status" + o.detail;
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "theta-combinatorics", theta_combinatorics},
      {2, "admissible-pair-census", pair_census},
      {3, "catalog", named_cell_catalog},
      {4, "law-suite", law_suite},
      {5, "stabilization", stabilization},
      {6, "strict-collapse-vs-weak-freedom", strict_vs_weak},
      {7, "strict-oracle-agreement", oracle_agreement},
      {8, "determinism", determinism},
      {9, "truncation-honesty", truncation_honesty},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.ok;
    char t[32];
    std::snprintf(t, sizeof t, "%.1fs", secs);
    std::cout << "criterion " << c.id << " " << c.name << ": " << (o.ok ? "PASS" : "FAIL") << " ("
              << o.detail << ") " << t << std::endl;
  }
  return failed ? 1 : 0;
}
