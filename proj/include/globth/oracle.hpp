#pragma once

#include "globth/core.hpp"
#include "globth/verify.hpp"

#include <string>
#include <vector>

namespace globth {

// Words in the free groupoid on the 1-skeleton of a pasting diagram.
// Letters are +(e+1) for edge e and -(e+1) for its inverse, composed
// diagrammatically (f·f⁻¹ is a loop at the source of f).
struct OracleWord {
  int start = 0;
  std::vector<int> letters;
  friend bool operator==(const OracleWord &, const OracleWord &) = default;
};

struct NonComposableWord : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

int word_end(const PastingDiagram &pd, const OracleWord &w); // throws NonComposableWord
OracleWord strict_reduce_word(const Table &p, const OracleWord &w);
// Cancels adjacent inverse letters in the order given by `picks` (each pick
// selects among the currently cancellable positions, modulo their number).
OracleWord reduce_in_order(const OracleWord &w, const std::vector<unsigned> &picks);

struct StrictHomTable {
  Table arity;
  std::vector<std::size_t> counts;         // counts[m], m = 0..n
  std::vector<OracleWord> one_cells;       // reduced word per ordered vertex pair
};

// Cells of the free strict ∞-groupoid on a height <= 1 pasting scheme.
StrictHomTable strict_hom_table(const Table &p, int n);
std::size_t strict_hom_count(const Table &p, int n);
// Level m+1 counted from level m cells by tallying boundaries and by a
// direct filter over all pairs; both are returned.
std::pair<std::size_t, std::size_t> parallel_pair_counts(const Table &p, int m);

LawCheckReport crosscheck_strict(const Tower &tower, const Table &p, int n);

} // namespace globth
