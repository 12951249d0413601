#include "globth/catalog.hpp"

#include <sstream>

namespace globth {

namespace {

std::string gen_line(GenRef g) {
  std::ostringstream os;
  os << "gen " << g->name();
  if (g->kind == GenKind::Sphere) {
    os << " kind=sphere label=" << g->label << " dim=" << g->k << " arity=" << g->arity->text;
    if (g->src) os << " src=" << term_str(g->src) << " tgt=" << term_str(g->tgt);
    os << " flavor=" << flavor_name(g->flavor);
    return os.str();
  }
  os << " stage=" << g->k << " arity=" << g->arity->text << " src=" << term_str(g->src)
     << " tgt=" << term_str(g->tgt) << " flavor=" << flavor_name(g->flavor);
  if (g->copy > 0) os << " copy=" << g->copy;
  return os.str();
}

std::string rounds_str(const std::vector<std::size_t> &rounds) {
  std::string s;
  for (std::size_t i = 0; i < rounds.size(); ++i) s += (i ? "," : "") + std::to_string(rounds[i]);
  return s;
}

void write_layer(std::ostringstream &os, const Theory &T, std::size_t i) {
  const auto &gens = T.layer_generators(i);
  const Layer &L = T.layer(i);
  os << "layer index=" << i << " k=" << L.k << " copy=" << L.copy
     << " flavor=" << flavor_name(L.flavor) << " kind=" << (L.explicit_only ? "explicit" : "lift")
     << "\n";
  for (GenRef g : gens) os << gen_line(g) << "\n";
  os << "truncation layer=" << i << " status=" << status_name(L.status)
     << " iterations=" << L.iterations;
  if (!L.rounds.empty()) os << " saturation-rounds=" << rounds_str(L.rounds);
  os << "\n";
  if (T.mode() != Mode::Strict) return;
  for (GenRef g : gens) {
    if (g->dim() < 1) continue;
    Term t = generic_term(g);
    for (Term b : base_terms(g->arity, g->dim()))
      if (T.equal(t, b)) os << "eq " << term_str(t) << " = " << term_str(b) << "\n";
  }
}

struct Field {
  std::string key, value;
  int col; // 1-based column of the value
};

// Splits "word word key=value key=value ..." where values may contain spaces
// but never "=".
std::vector<Field> fields(const std::string &line, std::size_t from, int lineno) {
  std::vector<std::size_t> starts;
  for (std::size_t i = from; i < line.size(); ++i) {
    if (i != from && line[i - 1] != ' ') continue;
    std::size_t j = i;
    while (j < line.size() && (islower(static_cast<unsigned char>(line[j])) || line[j] == '-')) ++j;
    if (j > i && j < line.size() && line[j] == '=') starts.push_back(i);
  }
  if (starts.empty() || starts.front() != from)
    throw ParseError("expected key=value", lineno, static_cast<int>(from) + 1);
  std::vector<Field> out;
  for (std::size_t n = 0; n < starts.size(); ++n) {
    std::size_t s = starts[n], eq = line.find('=', s);
    std::size_t end = n + 1 < starts.size() ? starts[n + 1] - 1 : line.size();
    out.push_back({line.substr(s, eq - s), line.substr(eq + 1, end - eq - 1),
                   static_cast<int>(eq) + 2});
  }
  return out;
}

const Field &get(const std::vector<Field> &fs, const std::string &key, int lineno, int col) {
  for (const auto &f : fs)
    if (f.key == key) return f;
  throw ParseError("missing " + key + "=", lineno, col);
}

const Field *find(const std::vector<Field> &fs, const std::string &key) {
  for (const auto &f : fs)
    if (f.key == key) return &f;
  return nullptr;
}

int to_int(const Field &f, int lineno) {
  try {
    std::size_t used = 0;
    int v = std::stoi(f.value, &used);
    if (used != f.value.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception &) {
    throw ParseError("expected an integer for " + f.key + "=", lineno, f.col);
  }
}

std::vector<std::size_t> parse_rounds(const Field &f, int lineno) {
  std::vector<std::size_t> out;
  std::stringstream in(f.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception &) {
      throw ParseError("bad saturation-rounds list", lineno, f.col);
    }
  }
  return out;
}

TruncStatus parse_status(const Field &f, int lineno) {
  if (f.value == "fixpoint") return TruncStatus::Fixpoint;
  if (f.value == "bound") return TruncStatus::Bound;
  if (f.value == "lazy") return TruncStatus::Lazy;
  throw ParseError("expected fixpoint, bound or lazy", lineno, f.col);
}

Flavor parse_flavor(const Field &f, int lineno) {
  if (f.value == "free") return Flavor::Free;
  if (f.value == "unique") return Flavor::Unique;
  throw ParseError("expected free or unique", lineno, f.col);
}

Mode parse_mode(const Field &f, int lineno) {
  if (f.value == "weak") return Mode::Weak;
  if (f.value == "strict") return Mode::Strict;
  throw ParseError("expected weak or strict", lineno, f.col);
}

ArityRef parse_arity(const Field &f, int lineno) {
  try {
    return intern_arity(f.value);
  } catch (const MalformedTable &e) {
    throw ParseError(e.what(), lineno, f.col);
  }
}

FragmentBounds parse_bounds(const std::vector<Field> &fs, int lineno) {
  FragmentBounds b;
  b.max_arity_length = to_int(get(fs, "max-arity-len", lineno, 1), lineno);
  b.max_dim = to_int(get(fs, "max-dim", lineno, 1), lineno);
  b.max_depth = to_int(get(fs, "max-depth", lineno, 1), lineno);
  b.max_iterations = to_int(get(fs, "max-iter", lineno, 1), lineno);
  b.max_size = to_int(get(fs, "max-size", lineno, 1), lineno);
  b.max_arity_height = to_int(get(fs, "max-arity-height", lineno, 1), lineno);
  try {
    b.validate();
  } catch (const std::exception &e) {
    throw ParseError(e.what(), lineno, 1);
  }
  return b;
}

bool starts_with(const std::string &s, const std::string &w) { return s.compare(0, w.size(), w) == 0; }

// Line-driven reader for layer blocks shared by theory and tower files.
struct LayerReader {
  Theory::Ptr cur;       // theory including the open layer
  std::shared_ptr<Layer> open;
  std::size_t expected_index = 0;

  void layer_line(const std::string &line, int lineno) {
    auto fs = fields(line, 6, lineno);
    int index = to_int(get(fs, "index", lineno, 7), lineno);
    if (index != static_cast<int>(expected_index))
      throw ParseError("expected layer index " + std::to_string(expected_index), lineno, 7);
    auto L = std::make_shared<Layer>();
    L->k = to_int(get(fs, "k", lineno, 1), lineno);
    L->copy = to_int(get(fs, "copy", lineno, 7), lineno);
    L->flavor = parse_flavor(get(fs, "flavor", lineno, 7), lineno);
    const Field &kind = get(fs, "kind", lineno, 7);
    if (kind.value != "lift" && kind.value != "explicit")
      throw ParseError("expected kind=lift or kind=explicit", lineno, kind.col);
    L->explicit_only = kind.value == "explicit";
    L->materialized = true;
    cur = cur->with_layer(L, false);
    open = L;
    ++expected_index;
  }

  Term term(const Field &f, ArityRef A, int lineno) {
    return parse_term(f.value, A, cur.get(), lineno, f.col - 1).term;
  }

  void gen_line(const std::string &line, int lineno) {
    if (!open) throw ParseError("gen line before any layer line", lineno, 1);
    if (line.size() < 22 || line.compare(4, 2, "g#") != 0)
      throw ParseError("expected g#<16 hex digits>", lineno, 5);
    std::string hex = line.substr(6, 16);
    uint64_t id = 0;
    try {
      id = std::stoull(hex, nullptr, 16);
    } catch (const std::exception &) {
      throw ParseError("expected g#<16 hex digits>", lineno, 5);
    }
    auto fs = fields(line, 23, lineno);
    ArityRef A = parse_arity(get(fs, "arity", lineno, 24), lineno);
    const Field *kind = find(fs, "kind");
    GenRef g;
    if (kind && kind->value == "sphere") {
      const Field &label = get(fs, "label", lineno, 24);
      int dim = to_int(get(fs, "dim", lineno, 24), lineno);
      Term s = nullptr, t = nullptr;
      if (const Field *sf = find(fs, "src")) s = term(*sf, A, lineno);
      if (const Field *tf = find(fs, "tgt")) t = term(*tf, A, lineno);
      try {
        g = intern_sphere_cell(label.value, dim, A, s, t);
      } catch (const std::exception &e) {
        throw ParseError(e.what(), lineno, label.col);
      }
    } else {
      if (kind) throw ParseError("unknown generator kind", lineno, kind->col);
      int k = to_int(get(fs, "stage", lineno, 24), lineno);
      const Field &sf = get(fs, "src", lineno, 24);
      const Field &tf = get(fs, "tgt", lineno, 24);
      Term s = term(sf, A, lineno), t = term(tf, A, lineno);
      Flavor fl = parse_flavor(get(fs, "flavor", lineno, 24), lineno);
      int copy = 0;
      if (const Field *cf = find(fs, "copy")) copy = to_int(*cf, lineno);
      try {
        g = intern_lift(k, copy, fl, A, s, t);
      } catch (const std::exception &e) {
        throw ParseError(e.what(), lineno, sf.col);
      }
      if (!open->explicit_only &&
          (k != open->k || copy != open->copy || fl != open->flavor))
        throw ParseError("generator does not belong to the open layer", lineno, 5);
    }
    if (g->id != id)
      throw ParseError("generator id mismatch: content hashes to " + g->name(), lineno, 5);
    if (!open->explicit_only && cur->layer_of(g) != static_cast<int>(expected_index - 1))
      throw ParseError("not an admissible lift for layer " + std::to_string(expected_index - 1),
                       lineno, 5);
    open->add(g);
  }

  void truncation_line(const std::string &line, int lineno) {
    if (!open) throw ParseError("truncation line before any layer line", lineno, 1);
    auto fs = fields(line, 11, lineno);
    open->status = parse_status(get(fs, "status", lineno, 12), lineno);
    open->iterations = to_int(get(fs, "iterations", lineno, 12), lineno);
    if (const Field *r = find(fs, "saturation-rounds")) open->rounds = parse_rounds(*r, lineno);
  }

  void eq_line(const std::string &line, int lineno) {
    if (!open) throw ParseError("eq line before any layer line", lineno, 1);
    std::size_t mid = line.find(" = ");
    if (mid == std::string::npos) throw ParseError("expected '<term> = <term>'", lineno, 4);
    // Arity is that of the head generator on the left.
    std::string left = line.substr(3, mid - 3);
    if (!starts_with(left, "g#") || left.size() < 18)
      throw ParseError("expected a generator application", lineno, 4);
    GenRef head = find_generator(std::stoull(left.substr(2, 16), nullptr, 16));
    if (!head) throw ParseError("unknown generator " + left.substr(0, 18), lineno, 4);
    Term a = parse_term(left, head->arity, cur.get(), lineno, 3).term;
    Term b = parse_term(line.substr(mid + 3), head->arity, cur.get(), lineno,
                        static_cast<int>(mid) + 3)
                 .term;
    if (!cur->equal(a, b)) throw ParseError("eq does not hold in this theory", lineno, 4);
  }

  bool line(const std::string &l, int lineno) {
    if (starts_with(l, "layer ")) layer_line(l, lineno);
    else if (starts_with(l, "gen ")) gen_line(l, lineno);
    else if (starts_with(l, "truncation ")) truncation_line(l, lineno);
    else if (starts_with(l, "eq ")) eq_line(l, lineno);
    else return false;
    return true;
  }
};

std::vector<std::string> split_lines(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

} // namespace

std::string serialize_theory(const Theory &T, int stage) {
  std::ostringstream os;
  os << "theory mode=" << mode_name(T.mode()) << " stage=" << stage << "\n";
  os << "bounds " << T.bounds().str() << "\n";
  for (std::size_t i = 0; i < T.num_layers(); ++i) write_layer(os, T, i);
  return os.str();
}

Theory::Ptr parse_theory(const std::string &text) {
  auto lines = split_lines(text);
  if (lines.empty() || !starts_with(lines[0], "theory "))
    throw ParseError("expected 'theory mode=... stage=...'", 1, 1);
  auto head = fields(lines[0], 7, 1);
  Mode mode = parse_mode(get(head, "mode", 1, 8), 1);
  to_int(get(head, "stage", 1, 8), 1);
  if (lines.size() < 2 || !starts_with(lines[1], "bounds "))
    throw ParseError("expected 'bounds ...'", 2, 1);
  FragmentBounds b = parse_bounds(fields(lines[1], 7, 2), 2);
  LayerReader rd{Theory::base(mode, b), nullptr, 0};
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    if (lines[i].empty()) continue;
    if (!rd.line(lines[i], lineno))
      throw ParseError("expected layer, gen, truncation or eq line", lineno, 1);
  }
  return rd.cur;
}

std::string serialize_tower(const Tower &tower) {
  std::ostringstream os;
  os << "tower mode=" << tower_kind_name(tower.kind)
     << " stages=" << tower.stages.size() - 1 << "\n";
  os << "bounds " << tower.bounds.str() << "\n";
  for (std::size_t s = 1; s < tower.stages.size(); ++s) {
    const Theory &T = *tower.stages[s];
    os << tower.reports[s - 1].str() << "\n";
    write_layer(os, T, T.num_layers() - 1);
  }
  return os.str();
}

Tower parse_tower(const std::string &text) {
  auto lines = split_lines(text);
  if (lines.empty() || !starts_with(lines[0], "tower "))
    throw ParseError("expected 'tower mode=... stages=...'", 1, 1);
  auto head = fields(lines[0], 6, 1);
  Tower tw;
  try {
    tw.kind = parse_tower_kind(get(head, "mode", 1, 7).value);
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what(), 1, get(head, "mode", 1, 7).col);
  }
  const int stages = to_int(get(head, "stages", 1, 7), 1);
  if (lines.size() < 2 || !starts_with(lines[1], "bounds "))
    throw ParseError("expected 'bounds ...'", 2, 1);
  tw.bounds = parse_bounds(fields(lines[1], 7, 2), 2);
  LayerReader rd{Theory::base(tw.mode(), tw.bounds), nullptr, 0};
  tw.stages.push_back(rd.cur);
  auto close_stage = [&]() {
    if (tw.reports.size() == tw.stages.size()) {
      tw.inclusions.push_back(inclusion_morphism(tw.stages.back(), rd.cur,
                                                 "J" + std::to_string(tw.stages.size() - 1)));
      tw.stages.push_back(rd.cur);
    }
  };
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const std::string &l = lines[i];
    if (l.empty()) continue;
    if (starts_with(l, "stage=")) {
      close_stage();
      auto fs = fields(l, 0, lineno);
      StageReport rep;
      rep.stage = to_int(get(fs, "stage", lineno, 1), lineno);
      const Field &k = get(fs, "k", lineno, 1);
      rep.k = k.value == "all" ? -1 : to_int(k, lineno);
      rep.new_generators = std::stoull(get(fs, "new-generators", lineno, 1).value);
      rep.status = parse_status(get(fs, "status", lineno, 1), lineno);
      rep.iterations = to_int(get(fs, "iterations", lineno, 1), lineno);
      if (const Field *r = find(fs, "saturation-rounds")) rep.rounds = parse_rounds(*r, lineno);
      if (rep.stage != static_cast<int>(tw.stages.size()))
        throw ParseError("expected stage " + std::to_string(tw.stages.size()), lineno, 1);
      tw.reports.push_back(rep);
      continue;
    }
    if (tw.reports.size() != tw.stages.size())
      throw ParseError("layer data outside a stage block", lineno, 1);
    if (!rd.line(l, lineno))
      throw ParseError("expected stage, layer, gen, truncation or eq line", lineno, 1);
  }
  close_stage();
  if (static_cast<int>(tw.stages.size()) - 1 != stages)
    throw ParseError("header announces " + std::to_string(stages) + " stages, found " +
                         std::to_string(tw.stages.size() - 1),
                     1, 1);
  return tw;
}

bool structurally_equal(const Theory &a, const Theory &b) {
  if (a.mode() != b.mode() || !(a.bounds() == b.bounds()) || a.num_layers() != b.num_layers())
    return false;
  for (std::size_t i = 0; i < a.num_layers(); ++i) {
    const auto &ga = a.layer_generators(i);
    const auto &gb = b.layer_generators(i);
    const Layer &x = a.layer(i), &y = b.layer(i);
    if (x.k != y.k || x.copy != y.copy || x.flavor != y.flavor ||
        x.explicit_only != y.explicit_only || x.status != y.status ||
        x.iterations != y.iterations || x.rounds != y.rounds || ga != gb)
      return false;
  }
  return true;
}

} // namespace globth
