#pragma once

#include "globth/core.hpp"

namespace testsupport {

// Independent hom count: every dimension-preserving assignment of cells that
// commutes with source and target, found by plain odometer enumeration.
inline std::size_t brute_force_hom(const globth::Table &p, const globth::Table &q) {
  globth::PastingDiagram a = globth::realize(p), b = globth::realize(q);
  std::vector<std::pair<int, int>> cells; // (dim, index) of the source, in order
  for (int d = 0; d <= a.top_dim(); ++d)
    for (int i = 0; i < a.cells(d); ++i) cells.push_back({d, i});
  for (auto [d, i] : cells)
    if (b.cells(d) == 0) return 0;
  std::vector<int> digit(cells.size(), 0);
  std::size_t count = 0;
  while (true) {
    std::vector<std::vector<int>> img(a.top_dim() + 1);
    for (int d = 0; d <= a.top_dim(); ++d) img[d].resize(a.cells(d));
    for (std::size_t n = 0; n < cells.size(); ++n) img[cells[n].first][cells[n].second] = digit[n];
    bool ok = true;
    for (int d = 1; d <= a.top_dim() && ok; ++d)
      for (int i = 0; i < a.cells(d) && ok; ++i)
        ok = b.src[d][img[d][i]] == img[d - 1][a.src[d][i]] &&
             b.tgt[d][img[d][i]] == img[d - 1][a.tgt[d][i]];
    count += ok;
    std::size_t n = 0;
    while (n < cells.size() && ++digit[n] == b.cells(cells[n].first)) digit[n++] = 0;
    if (n == cells.size()) return count;
  }
}

} // namespace testsupport
