#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "globth/oracle.hpp"

#include <random>

using namespace globth;

namespace {

FragmentBounds small(int max_dim = 2) {
  FragmentBounds b;
  b.max_arity_length = 3;
  b.max_dim = max_dim;
  b.max_depth = 2;
  b.max_size = 2;
  b.max_arity_height = 1;
  return b;
}

std::vector<Table> low_tables(int max_len) { return tables_up_to(max_len, 1); }

// Random composable word of at most max_len letters.
OracleWord random_walk(const PastingDiagram &pd, std::mt19937 &rng, int max_len) {
  OracleWord w{static_cast<int>(rng() % pd.cells(0)), {}};
  int at = w.start;
  int len = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < len; ++i) {
    std::vector<int> moves;
    for (int e = 0; e < pd.cells(1); ++e) {
      if (pd.src[1][e] == at) moves.push_back(e + 1);
      if (pd.tgt[1][e] == at) moves.push_back(-(e + 1));
    }
    if (moves.empty()) break;
    int l = moves[rng() % moves.size()];
    w.letters.push_back(l);
    at = l > 0 ? pd.tgt[1][l - 1] : pd.src[1][-l - 1];
  }
  return w;
}

} // namespace

TEST_CASE("oracle spot values") {
  Table e = parse_table("(1)"), ee = parse_table("(1,0,1)");
  CHECK(strict_hom_count(e, 0) == 2);
  CHECK(strict_hom_count(e, 1) == 4);
  CHECK(strict_hom_count(ee, 1) == 9);
  CHECK(strict_hom_count(e, 2) == 4);
  CHECK(strict_hom_count(parse_table("(0)"), 3) == 1);
  CHECK_THROWS_AS(strict_hom_count(parse_table("(2)"), 1), std::invalid_argument);
  CHECK_THROWS_AS(strict_reduce_word(parse_table("(2,1,2)"), OracleWord{}), std::invalid_argument);
}

TEST_CASE("hom tables: vertices at level 0 and one reduced word per vertex pair") {
  for (const Table &p : low_tables(7)) {
    CAPTURE(p.str());
    PastingDiagram pd = realize(p);
    StrictHomTable t = strict_hom_table(p, 3);
    CHECK(t.counts[0] == static_cast<std::size_t>(pd.cells(0)));
    REQUIRE(t.one_cells.size() == t.counts[1]);
    const int nv = pd.cells(0);
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) {
        const OracleWord &w = t.one_cells[a * nv + b];
        CHECK(w.start == a);
        CHECK(word_end(pd, w) == b);
        CHECK(strict_reduce_word(p, w) == w);
      }
    for (int m = 0; m + 1 < 4; ++m) CHECK(t.counts[m + 1] == parallel_pair_counts(p, m).first);
  }
}

TEST_CASE("parallel pair counts agree between tally and direct filter") {
  for (const Table &p : low_tables(7))
    for (int m = 0; m <= 4; ++m) {
      auto [tally, direct] = parallel_pair_counts(p, m);
      CAPTURE(p.str());
      CAPTURE(m);
      CHECK(tally == direct);
      if (m >= 1) CHECK(strict_hom_count(p, m + 1) == tally);
    }
}

TEST_CASE("word reduction examples") {
  Table e = parse_table("(1)"), ee = parse_table("(1,0,1)");
  // f then f inverse: a loop at the source of f
  CHECK(strict_reduce_word(e, {0, {1, -1}}) == OracleWord{0, {}});
  // e1: v2 -> v0 then e0: v0 -> v1 is already reduced
  CHECK(strict_reduce_word(ee, {2, {2, 1}}) == OracleWord{2, {2, 1}});
  // two cancellations down to the empty loop at v0
  CHECK(strict_reduce_word(ee, {0, {-2, 2, 1, -1}}) == OracleWord{0, {}});
  // distinct edges of a pasting scheme never share a target, so a⁻¹·a·b⁻¹·b
  // does not compose
  CHECK_THROWS_AS(strict_reduce_word(ee, {1, {-1, 1, -2, 2}}), NonComposableWord);
  CHECK_THROWS_AS(strict_reduce_word(ee, {0, {2}}), NonComposableWord);
  CHECK_THROWS_AS(strict_reduce_word(ee, {0, {5}}), NonComposableWord);
}

TEST_CASE("word reduction is idempotent, shortening and confluent") {
  std::mt19937 rng(20240611);
  for (const Table &p : low_tables(7)) {
    PastingDiagram pd = realize(p);
    if (pd.cells(1) == 0) continue;
    for (int trial = 0; trial < 200; ++trial) {
      OracleWord w = random_walk(pd, rng, 8);
      OracleWord r = strict_reduce_word(p, w);
      CHECK(strict_reduce_word(p, r) == r);
      CHECK(r.letters.size() <= w.letters.size());
      CHECK(word_end(pd, r) == word_end(pd, w));
      for (int order = 0; order < 5; ++order) {
        std::vector<unsigned> picks(8);
        for (auto &x : picks) x = static_cast<unsigned>(rng());
        CHECK(reduce_in_order(w, picks) == r);
      }
    }
  }
}

TEST_CASE("strict tower generator counts follow the oracle recursion") {
  // One lift per class of parallel k-terms: the number of (k+1)-cells.
  Tower tw = build_tower(TowerKind::Strict, 2, small());
  for (int s = 1; s <= 2; ++s) {
    std::size_t expect = 0;
    for (const Table &p : tables_up_to(3, 1)) expect += strict_hom_count(p, s);
    CHECK(tw.reports[s - 1].new_generators == expect);
  }
}

TEST_CASE("crosscheck agrees with the oracle in converged fragments") {
  Tower tw = build_tower(TowerKind::Strict, 2, small());
  struct Case {
    const char *arity;
    int n;
    std::size_t classes;
  };
  for (Case c : {Case{"(1)", 1, 4}, Case{"(1,0,1)", 1, 9}, Case{"(1)", 2, 4}, Case{"(1)", 0, 2}}) {
    LawCheckReport r = crosscheck_strict(tw, parse_table(c.arity), c.n);
    CAPTURE(c.arity);
    CAPTURE(c.n);
    CHECK(r.conclusive);
    CHECK(r.pass);
    REQUIRE(r.verdicts.size() == 2);
    CHECK(r.verdicts[0].generator ==
          "key-classes=" + std::to_string(c.classes) + " oracle=" + std::to_string(c.classes));
    std::string text = r.str();
    CHECK(text.find("status=converged") != std::string::npos);
    CHECK(text.find("status=fixpoint") != std::string::npos);
    CHECK(text.find("result PASS") != std::string::npos);
  }
}

TEST_CASE("crosscheck refuses weak towers and unstable dimensions") {
  Tower ic = build_tower(TowerKind::IC, 1, small());
  CHECK_THROWS_AS(crosscheck_strict(ic, parse_table("(1)"), 1), std::invalid_argument);
  Tower st = build_tower(TowerKind::Strict, 1, small());
  CHECK_THROWS_AS(crosscheck_strict(st, parse_table("(1)"), 2), std::invalid_argument);
  CHECK_THROWS_AS(crosscheck_strict(st, parse_table("(2)"), 1), std::invalid_argument);
}

TEST_CASE("shallow fragments are reported as not converged") {
  FragmentBounds b = small();
  b.max_depth = 1;
  Tower tw = build_tower(TowerKind::Strict, 2, b);
  LawCheckReport r = crosscheck_strict(tw, parse_table("(1,0,1)"), 1);
  CHECK_FALSE(r.conclusive);
  CHECK(r.error == "non-converged fragment");
  CHECK(r.verdicts.empty());
  CHECK(r.str().find("status=not-converged") != std::string::npos);
}
