#pragma once

#include "globth/theory.hpp"

#include <string>
#include <vector>

namespace globth {

// S_{p,k}: Θ₀^op plus two free maps f, g: p -> k. For k >= 1 their common
// boundary is a free (k-1)-sphere, so s∘f = s∘g and t∘f = t∘g hold by
// construction.
struct SphereData {
  Theory::Ptr theory;
  GenRef f, g;
};
SphereData sphere(const Table &p, int k, const FragmentBounds &b = {});

// D_{p,k}: the sphere plus one lift of (f, g).
struct DiskData {
  Theory::Ptr theory;
  GenRef f, g, delta;
};
DiskData disk(const Table &p, int k, const FragmentBounds &b = {});
Morphism::Ptr sphere_disk_inclusion(const Table &p, int k, const FragmentBounds &b = {});

// The family I_k restricted to bounds: arities (height <= k+1, length <= L).
std::vector<std::pair<Table, int>> generating_family(int k, const FragmentBounds &b);

std::vector<AdmissiblePair> admissible_pairs(const Theory &T, int k);

struct ExtensionResult {
  Theory::Ptr theory;
  Morphism::Ptr eta;
  std::size_t added = 0;
  TruncStatus status = TruncStatus::Bound;
  int iterations = 0;
  std::vector<std::size_t> rounds; // strict: class counts per saturation round
};

// One lift-adding step. On a theory whose top layer already lifts dimension
// k with the same flavor the step continues that layer, so pairs carrying a
// lift get no second one.
ExtensionResult extend_one_step(Theory::Ptr T, int k, Flavor flavor);
// R_k (free) or S_k (unique), iterated up to bounds.max_iterations.
ExtensionResult fibrant_replace(Theory::Ptr T, int k, Flavor flavor);

enum class TowerKind { FC, IC, Strict };
std::string tower_kind_name(TowerKind k);
TowerKind parse_tower_kind(const std::string &s);

struct StageReport {
  int stage = 0;
  int k = -1;            // -1 for FC stages (all dimensions)
  std::size_t new_generators = 0;
  TruncStatus status = TruncStatus::Bound;
  int iterations = 0;
  std::vector<std::size_t> rounds;
  std::string str() const;
};

struct Tower {
  TowerKind kind = TowerKind::IC;
  FragmentBounds bounds;
  std::vector<Theory::Ptr> stages;
  std::vector<Morphism::Ptr> inclusions; // inclusions[s]: stage s -> stage s+1
  std::vector<StageReport> reports;      // reports[s-1] describes stage s
  Mode mode() const { return kind == TowerKind::Strict ? Mode::Strict : Mode::Weak; }
};

Tower build_tower(TowerKind kind, int n_stages, const FragmentBounds &b);

// Canonical lift of a pair: the generator (weak) or the least term of the
// class of lifts (strict).
Term lookup_lift(const Theory &T, const AdmissiblePair &pair);

int stable_dim(const Tower &tower, int stage);

// From a free-flavor layered theory to the unique-flavor theory with the same
// layer word: every free lift goes to the unique lift of its image pair.
Morphism::Ptr quotient_morphism(Theory::Ptr weak, Theory::Ptr strict);

} // namespace globth
