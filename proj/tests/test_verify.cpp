#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "globth/verify.hpp"

using namespace globth;

namespace {

FragmentBounds bounds(int depth, int size) {
  FragmentBounds b;
  b.max_arity_length = 3;
  b.max_dim = 2;
  b.max_depth = depth;
  b.max_size = size;
  b.max_arity_height = 1;
  return b;
}

struct Job {
  Law law;
  std::vector<int> params;
};

std::vector<Job> suite() {
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

Theory::Ptr stage2(Mode m, FragmentBounds b) { return Theory::base(m, b)->extend(0)->extend(1); }

} // namespace

TEST_CASE("law names round-trip and families expand") {
  for (int i = 0; i <= static_cast<int>(Law::MuHatUniqueness); ++i)
    CHECK(parse_law(law_name(static_cast<Law>(i))) == static_cast<Law>(i));
  CHECK(law_family("pentagons").size() == 2);
  CHECK(law_family("monad").size() == 3);
  CHECK(law_family("unit-triangle").size() == 2);
  CHECK(law_family("yang-baxter") == std::vector<Law>{Law::YangBaxter});
  CHECK_THROWS_AS(parse_law("pentagon"), std::invalid_argument);
}

TEST_CASE("structure maps preserve boundaries") {
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  auto eta = eta_map(T, 0);
  CHECK(check_morphism(*eta, T->generators()).ok);
  auto mu = build_mu(T, 0);
  CHECK(check_morphism(*mu, mu->source->generators()).ok);
  auto lam = build_lambda(T, 0, 1);
  CHECK(lam->source->word() == apply_word(T, {1, 0})->word());
  CHECK(lam->target->word() == apply_word(T, {0, 1})->word());
  CHECK(check_morphism(*lam, lam->source->generators()).ok);
  CHECK_THROWS_AS(build_lambda(T, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_mu_hat(T, 2, 3), std::invalid_argument);
  CHECK(range_word(3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("mu at k sends an outer lift of an inner-lifted pair to the inner lift") {
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  auto mu = build_mu(T, 0);
  const Theory &RR = *mu->source;
  for (GenRef g : RR.layer_generators(1)) {
    GenRef inner = intern_lift(0, 0, Flavor::Free, g->arity, g->src, g->tgt);
    if (RR.layer_of(inner) == 0) CHECK(mu->on_generator(g) == generic_term(inner));
  }
}

TEST_CASE("parameter checks") {
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  CHECK_THROWS_AS(verify_law(Law::UnitTriangleLeft, {0}, T), std::invalid_argument);
  CHECK_THROWS_AS(verify_law(Law::YangBaxter, {0, 2, 1}, T), std::invalid_argument);
  CHECK_THROWS_AS(verify_law(Law::Completability, {2, 1}, T), std::invalid_argument);
}

TEST_CASE("reports state bounds, truncation status and the result") {
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  LawCheckReport r = verify_law(Law::UnitTriangleRight, {0, 1}, T);
  CHECK(r.pass);
  CHECK(r.conclusive);
  CHECK_FALSE(r.verdicts.empty());
  CHECK_FALSE(r.truncation.empty());
  for (const auto &t : r.truncation) {
    CHECK(t.find("status=") != std::string::npos);
    CHECK(t.find("status=lazy") == std::string::npos);
  }
  std::string text = r.str();
  CHECK(text.rfind("law unit-triangle-right params=0,1 mode=weak\n", 0) == 0);
  CHECK(text.find("\nbounds max-arity-len=3") != std::string::npos);
  CHECK(text.find("\nverdicts checked=") != std::string::npos);
  CHECK(text.find("result PASS") != std::string::npos);
  CHECK(r.str(true).find("\nPASS ") != std::string::npos);
}

TEST_CASE("a law with no generators in range passes with zero verdicts") {
  // Over the base theory at arity height 1 there are no 2-cells to lift.
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  LawCheckReport r = verify_law(Law::MonadUnitLeft, {2}, T);
  CHECK(r.pass);
  CHECK(r.verdicts.empty());
}

TEST_CASE("weak laws over the base theory at depth 2, quick subset") {
  auto T = Theory::base(Mode::Weak, bounds(2, 2));
  for (const Job &j : suite()) {
    if (j.law == Law::PentagonOuter || j.law == Law::MuHatAssoc || j.law == Law::Completability ||
        j.law == Law::MuHatUnitLeft || j.law == Law::MuHatUnitRight || j.law == Law::Naturality)
      continue;
    LawCheckReport r = verify_law(j.law, j.params, T);
    CAPTURE(r.str());
    CHECK(r.pass);
  }
}

TEST_CASE("weak laws over the stage-2 theory at depth 1") {
  auto T = stage2(Mode::Weak, bounds(1, 1));
  for (const Job &j : suite()) {
    LawCheckReport r = verify_law(j.law, j.params, T);
    CAPTURE(r.str());
    CHECK(r.pass);
    CHECK_FALSE(r.verdicts.empty());
  }
}

TEST_CASE("strict laws over the stage-2 theory at depth 2") {
  auto T = stage2(Mode::Strict, bounds(2, 2));
  for (const Job &j : suite()) {
    LawCheckReport r = verify_law(j.law, j.params, T);
    CAPTURE(r.str());
    CHECK(r.pass);
    CHECK_FALSE(r.verdicts.empty());
  }
}

TEST_CASE("mu-hat uniqueness holds strictly and fails weakly") {
  LawCheckReport s = verify_law(Law::MuHatUniqueness, {2}, stage2(Mode::Strict, bounds(2, 2)));
  CHECK(s.pass);
  LawCheckReport w = verify_law(Law::MuHatUniqueness, {2}, stage2(Mode::Weak, bounds(1, 1)));
  CHECK_FALSE(w.pass);
  REQUIRE(w.failures() > 0);
  std::string text = w.str();
  CHECK(text.find("FAIL g#") != std::string::npos);
  CHECK(text.find(" pair=") != std::string::npos);
  CHECK(text.find(" lhs=") != std::string::npos);
  CHECK(text.find("result FAIL") != std::string::npos);
}
