#include "globth/core.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace globth {

Table::Table(std::vector<int> d) : dims(std::move(d)) { validate_table(dims); }

int Table::height() const { return *std::max_element(dims.begin(), dims.end()); }

std::string Table::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(dims[i]);
  }
  return out + ")";
}

bool table_less(const Table &a, const Table &b) {
  if (a.dims.size() != b.dims.size()) return a.dims.size() < b.dims.size();
  return a.dims < b.dims;
}

void validate_table(const std::vector<int> &dims) {
  if (dims.empty() || dims.size() % 2 == 0)
    throw MalformedTable("table must have odd length, got " + std::to_string(dims.size()));
  for (int d : dims)
    if (d < 0) throw MalformedTable("table entries must be natural numbers");
  for (std::size_t i = 1; i < dims.size(); i += 2) {
    if (!(dims[i - 1] > dims[i] && dims[i] < dims[i + 1]))
      throw MalformedTable("zigzag violated at valley position " + std::to_string(i));
  }
}

Table parse_table(const std::string &text) {
  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 3 || s.front() != '(' || s.back() != ')')
    throw MalformedTable("table must look like (n1,...,nk): '" + text + "'");
  std::vector<int> dims;
  std::stringstream in(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit))
      throw MalformedTable("bad table entry '" + item + "' in '" + text + "'");
    dims.push_back(std::stoi(item));
  }
  return Table(dims);
}

int height(const Table &p) { return p.height(); }

std::vector<Table> tables_up_to(int max_len, int max_entry) {
  std::vector<Table> out;
  std::vector<int> cur;
  std::function<void()> rec = [&]() {
    if (cur.size() % 2 == 1) out.push_back(Table(cur));
    if (static_cast<int>(cur.size()) + 2 > max_len) return;
    int last = cur.back();
    for (int v = 0; v < last; ++v)
      for (int n = v + 1; n <= max_entry; ++n) {
        cur.push_back(v);
        cur.push_back(n);
        rec();
        cur.pop_back();
        cur.pop_back();
      }
  };
  for (int n = 0; n <= max_entry && max_len >= 1; ++n) {
    cur = {n};
    rec();
  }
  std::sort(out.begin(), out.end(), table_less);
  return out;
}

int PastingDiagram::total_cells() const { return std::accumulate(count.begin(), count.end(), 0); }

std::string PastingDiagram::dump() const {
  std::ostringstream os;
  for (int d = 0; d <= top_dim(); ++d) {
    os << "dim " << d << ": " << count[d] << " cells";
    if (d > 0) {
      os << " [";
      for (int i = 0; i < count[d]; ++i)
        os << (i ? ", " : "") << i << ":" << src[d][i] << "->" << tgt[d][i];
      os << "]";
    }
    os << "\n";
  }
  return os.str();
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

PastingDiagram realize(const Table &p) {
  validate_table(p.dims);
  const int np = p.peaks();
  // Node (peak, d, side): side 0 = source, 1 = target; the top cell uses side 0.
  std::vector<int> base(np + 1, 0);
  for (int i = 0; i < np; ++i) base[i + 1] = base[i] + 2 * (p.peak(i) + 1);
  auto node = [&](int i, int d, int side) { return base[i] + 2 * d + side; };
  Dsu dsu(base[np]);
  // Gluing along valley i: source boundary of peak i meets target boundary of peak i+1.
  for (int i = 0; i + 1 < np; ++i) {
    int v = p.valley(i);
    for (int d = 0; d < v; ++d) {
      dsu.unite(node(i, d, 0), node(i + 1, d, 0));
      dsu.unite(node(i, d, 1), node(i + 1, d, 1));
    }
    dsu.unite(node(i, v, 0), node(i + 1, v, 1));
  }
  const int top = p.height();
  PastingDiagram pd;
  pd.count.assign(top + 1, 0);
  pd.src.assign(top + 1, {});
  pd.tgt.assign(top + 1, {});
  pd.origin.assign(top + 1, {});
  std::vector<int> ordinal(base[np], -1);
  for (int i = 0; i < np; ++i) {
    const int P = p.peak(i);
    for (int d = 0; d <= P; ++d) {
      for (int side = 0; side < (d < P ? 2 : 1); ++side) {
        int r = dsu.find(node(i, d, side));
        if (ordinal[r] >= 0) continue;
        ordinal[r] = pd.count[d]++;
        pd.origin[d].push_back({i, P - d, side});
        if (d > 0) {
          pd.src[d].push_back(-1);
          pd.tgt[d].push_back(-1);
        }
      }
    }
  }
  for (int i = 0; i < np; ++i) {
    const int P = p.peak(i);
    pd.peak_top.push_back(ordinal[dsu.find(node(i, P, 0))]);
    for (int d = 1; d <= P; ++d) {
      for (int side = 0; side < (d < P ? 2 : 1); ++side) {
        int c = ordinal[dsu.find(node(i, d, side))];
        int s = ordinal[dsu.find(node(i, d - 1, 0))];
        int t = ordinal[dsu.find(node(i, d - 1, 1))];
        if (pd.src[d][c] < 0) {
          pd.src[d][c] = s;
          pd.tgt[d][c] = t;
        } else if (pd.src[d][c] != s || pd.tgt[d][c] != t) {
          throw std::logic_error("inconsistent gluing in realize " + p.str());
        }
      }
    }
  }
  return pd;
}

std::vector<CellRef> globe_cells(const Table &p, int m) {
  PastingDiagram pd = realize(p);
  std::vector<CellRef> out;
  for (int i = 0; i < pd.cells(m); ++i) out.push_back({m, i});
  return out;
}

std::string ThetaMor::str() const {
  std::ostringstream os;
  os << source.str() << " -> " << target.str() << " {";
  for (std::size_t d = 0; d < images.size(); ++d) {
    os << (d ? "; " : "") << d << ":";
    for (std::size_t i = 0; i < images[d].size(); ++i) os << (i ? "," : "") << images[d][i];
  }
  return os.str() + "}";
}

std::vector<ThetaMor> theta_hom(const Table &p, const Table &q) {
  PastingDiagram A = realize(p), B = realize(q);
  std::vector<ThetaMor> out;
  if (A.top_dim() > B.top_dim()) return out;
  const int top = A.top_dim();
  std::vector<std::vector<int>> img(top + 1);
  for (int d = 0; d <= top; ++d) img[d].assign(A.count[d], -1);
  // Cells in decreasing dimension; lower cells forced by already chosen ones.
  std::vector<CellRef> order;
  for (int d = top; d >= 0; --d)
    for (int i = 0; i < A.count[d]; ++i) order.push_back({d, i});
  // For each cell, the higher cells whose boundary it is.
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cofaces(top + 1);
  for (int d = 0; d <= top; ++d) cofaces[d].assign(A.count[d], {});
  for (int d = 1; d <= top; ++d)
    for (int i = 0; i < A.count[d]; ++i) {
      cofaces[d - 1][A.src[d][i]].push_back({i, 0});
      cofaces[d - 1][A.tgt[d][i]].push_back({i, 1});
    }
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == order.size()) {
      out.push_back({p, q, img});
      return;
    }
    auto [d, i] = order[pos];
    int forced = -1;
    for (auto [up, side] : cofaces[d][i]) {
      int u = img[d + 1][up];
      int want = side == 0 ? B.src[d + 1][u] : B.tgt[d + 1][u];
      if (forced >= 0 && forced != want) return;
      forced = want;
    }
    if (forced >= 0) {
      img[d][i] = forced;
      rec(pos + 1);
    } else {
      for (int c = 0; c < B.cells(d); ++c) {
        img[d][i] = c;
        rec(pos + 1);
      }
    }
    img[d][i] = -1;
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const ThetaMor &a, const ThetaMor &b) { return a.images < b.images; });
  return out;
}

ThetaMor theta_identity(const Table &p) {
  PastingDiagram A = realize(p);
  ThetaMor f{p, p, {}};
  for (int d = 0; d <= A.top_dim(); ++d) {
    f.images.emplace_back(A.count[d]);
    std::iota(f.images.back().begin(), f.images.back().end(), 0);
  }
  return f;
}

ThetaMor theta_compose(const ThetaMor &f, const ThetaMor &g) {
  if (!(f.target == g.source))
    throw std::invalid_argument("theta_compose: target " + f.target.str() + " != source " +
                                g.source.str());
  ThetaMor h{f.source, g.target, f.images};
  for (std::size_t d = 0; d < h.images.size(); ++d)
    for (auto &x : h.images[d]) x = g.images[d][x];
  return h;
}

bool theta_is_map(const ThetaMor &f) {
  PastingDiagram A = realize(f.source), B = realize(f.target);
  if (static_cast<int>(f.images.size()) != A.top_dim() + 1) return false;
  for (int d = 0; d <= A.top_dim(); ++d) {
    if (static_cast<int>(f.images[d].size()) != A.count[d]) return false;
    for (int i = 0; i < A.count[d]; ++i) {
      int x = f.images[d][i];
      if (x < 0 || x >= B.cells(d)) return false;
      if (d > 0 && (B.src[d][x] != f.images[d - 1][A.src[d][i]] ||
                    B.tgt[d][x] != f.images[d - 1][A.tgt[d][i]]))
        return false;
    }
  }
  return true;
}

} // namespace globth
