#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace globth {

struct MalformedTable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Odd-length zigzag sequence (n1, ..., n_{2k+1}). Entries at even positions
// are peaks, entries at odd positions are valleys.
struct Table {
  std::vector<int> dims;

  Table() = default;
  explicit Table(std::vector<int> d);

  int length() const { return static_cast<int>(dims.size()); }
  int peaks() const { return (length() + 1) / 2; }
  int peak(int i) const { return dims[2 * i]; }
  int valley(int i) const { return dims[2 * i + 1]; }
  int height() const;
  std::string str() const;

  friend bool operator==(const Table &, const Table &) = default;
};

// Ordering used everywhere tables are listed: shorter first, then lexicographic.
bool table_less(const Table &a, const Table &b);

void validate_table(const std::vector<int> &dims);
Table parse_table(const std::string &text);
int height(const Table &p);

// All valid tables with length <= max_len and entries <= max_entry, sorted.
std::vector<Table> tables_up_to(int max_len, int max_entry);

// How a cell of the realization is reached from the globe of a peak:
// `steps` applications of s or t to that peak's top cell.
struct CellOrigin {
  int peak;
  int steps;
  int side; // 0 = source, 1 = target; irrelevant when steps == 0
};

// Finite globular set realizing a table. Cells are numbered per dimension in
// construction order: peaks left to right, within a peak dimensions upward,
// source side before target side.
struct PastingDiagram {
  std::vector<int> count;              // count[d] = number of d-cells
  std::vector<std::vector<int>> src;   // src[d][i] for d >= 1
  std::vector<std::vector<int>> tgt;
  std::vector<std::vector<CellOrigin>> origin; // lowest peak reaching the cell
  std::vector<int> peak_top;           // ordinal of each peak's top cell

  int top_dim() const { return static_cast<int>(count.size()) - 1; }
  int cells(int d) const { return d < 0 || d > top_dim() ? 0 : count[d]; }
  int total_cells() const;
  std::string dump() const;
};

PastingDiagram realize(const Table &p);

struct CellRef {
  int dim;
  int index;
  friend bool operator==(const CellRef &, const CellRef &) = default;
};

std::vector<CellRef> globe_cells(const Table &p, int m);

// Map of globular sets realize(source) -> realize(target).
struct ThetaMor {
  Table source, target;
  std::vector<std::vector<int>> images; // images[d][i]

  std::string str() const;
  friend bool operator==(const ThetaMor &, const ThetaMor &) = default;
};

std::vector<ThetaMor> theta_hom(const Table &p, const Table &q);
ThetaMor theta_identity(const Table &p);
// g after f
ThetaMor theta_compose(const ThetaMor &f, const ThetaMor &g);
bool theta_is_map(const ThetaMor &f);

} // namespace globth
