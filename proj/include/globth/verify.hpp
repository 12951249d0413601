#pragma once

#include "globth/soa.hpp"

#include <string>
#include <vector>

namespace globth {

// R_{ks.back()} ... R_{ks.front()} T (ks applied innermost first).
Theory::Ptr apply_word(Theory::Ptr T, const std::vector<int> &ks);
std::vector<int> range_word(int n); // {0, ..., n-1}

Morphism::Ptr eta_map(Theory::Ptr T, int k);            // T -> R_k T
Morphism::Ptr apply_R(int k, Morphism::Ptr F);            // R_k(F)
Morphism::Ptr apply_word_map(const std::vector<int> &ks, Morphism::Ptr F);
Morphism::Ptr build_mu(Theory::Ptr T, int k);             // R_k R_k T -> R_k T
Morphism::Ptr build_lambda(Theory::Ptr T, int i, int j);  // R_i R_j T -> R_j R_i T, i < j

// Truncated R̂T = R_{N-1} ... R_0 T and the stagewise multiplication
// mu_hat_n : R_{n-1} ... R_0 (R̂T) -> R̂T, n <= N.
Theory::Ptr hat(Theory::Ptr T, int N);
Morphism::Ptr build_mu_hat(Theory::Ptr T, int N, int n);
// Multiplication of the composite monad A_n = R_{n-1} ... R_0: A_n A_n T -> A_n T.
Morphism::Ptr build_composite_mu(Theory::Ptr T, int n);

enum class Law {
  UnitTriangleLeft,
  UnitTriangleRight,
  Naturality,
  PentagonOuter,  // lambda o mu^i = R_j(mu^i) o lambda o R_i(lambda)
  PentagonInner,  // lambda o R_i(mu^j) = mu^j o R_j(lambda) o lambda
  YangBaxter,
  MonadUnitLeft,
  MonadUnitRight,
  MonadAssoc,
  MuHatUnitLeft,
  MuHatUnitRight,
  MuHatAssoc,
  Completability,
  MuHatUniqueness,
};
std::string law_name(Law l);
Law parse_law(const std::string &s);
// CLI law families expand to the individual laws above.
std::vector<Law> law_family(const std::string &family);

struct Verdict {
  std::string generator;
  bool ok = true;
  std::string lhs, rhs; // filled on failure
  std::string provenance;
};

struct LawCheckReport {
  std::string law;
  std::vector<int> params;
  Mode mode = Mode::Weak;
  FragmentBounds bounds;
  std::vector<std::string> truncation;      // per-layer status of every theory involved
  std::vector<std::string> morphism_checks; // boundary preservation of the pieces
  std::vector<Verdict> verdicts;
  std::string error; // construction failure (bound exhaustion etc.)
  bool pass = true;
  bool conclusive = true; // false when the fragment is too small to decide

  std::size_t failures() const;
  std::string str(bool verbose = false) const;
};

// params: (i,j) for triangles and pentagons, (i,j,m) for naturality,
// (i,j,k) for Yang-Baxter, (k) for monad laws, (N) for mu-hat laws and
// uniqueness, (n, N) for completability.
LawCheckReport verify_law(Law law, const std::vector<int> &params, Theory::Ptr T);

} // namespace globth
