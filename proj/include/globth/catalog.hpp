#pragma once

#include "globth/oracle.hpp"
#include "globth/soa.hpp"

#include <string>
#include <vector>

namespace globth {

// Named cells: Z (identity on 0-cells), c (composition of 1-cells), ω
// (inverse), a (associator), Z_l and Z_r (unitors).
//
// Slot convention A reads c∘(x,y) as Gen(c,[x,y]) with ε_i the i-th peak.
// Convention B reads composition slots and projection indices right to left;
// c itself is still the composition lift. Under B the associator formula
// names the reverse associator and the unitor formulas are ill-typed.
struct LabelMatch {
  std::string label;
  std::string conventions; // "A", "B" or "A,B"
};

struct CatalogEntry {
  std::vector<LabelMatch> labels; // empty = unnamed
  int stage;
  GenRef gen;
  std::string label_column() const;
  std::string convention_column() const;
  std::string tsv() const;
};

struct NamedPair {
  std::string label;
  std::string convention;
  AdmissiblePair pair;
};
// Boundary pairs of the named cells under both conventions, built from the
// lifts available in the tower (stage 2 is needed for the 2-cells).
std::vector<NamedPair> named_pairs(const Tower &tower);

std::vector<CatalogEntry> identify_cells(const Tower &tower);
std::string catalog_tsv(const std::vector<CatalogEntry> &entries, bool named_only = false);

// Text format.
std::string serialize_theory(const Theory &T, int stage);
Theory::Ptr parse_theory(const std::string &text);
std::string serialize_tower(const Tower &tower);
Tower parse_tower(const std::string &text);
bool structurally_equal(const Theory &a, const Theory &b);

int cli_dispatch(int argc, char **argv);

} // namespace globth
