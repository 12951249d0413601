#include "globth/catalog.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace globth {

namespace {

namespace fs = std::filesystem;

void add_bounds(CLI::App *app, FragmentBounds &b) {
  app->add_option("--max-arity-len", b.max_arity_length, "longest arity table considered");
  app->add_option("--max-dim", b.max_dim, "highest lift dimension");
  app->add_option("--max-depth", b.max_depth, "term nesting depth");
  app->add_option("--max-iter", b.max_iterations, "lift iterations per stage");
  app->add_option("--max-size", b.max_size, "generator nodes per term (0 = no limit)");
  app->add_option("--max-arity-height", b.max_arity_height,
                  "tallest arity used for pairs (-1 = admissibility only)");
}

std::vector<int> parse_indices(const std::string &s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad index list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> default_params(Law l) {
  switch (l) {
  case Law::Naturality: return {0, 1, 0};
  case Law::YangBaxter: return {0, 1, 2};
  case Law::MonadUnitLeft:
  case Law::MonadUnitRight:
  case Law::MonadAssoc: return {0};
  case Law::MuHatUnitLeft:
  case Law::MuHatUnitRight:
  case Law::MuHatAssoc:
  case Law::MuHatUniqueness: return {2};
  case Law::Completability: return {1, 2};
  default: return {0, 1};
  }
}

std::string read_file(const fs::path &p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string tower_header(const Tower &tw) {
  std::ostringstream os;
  os << "tower mode=" << tower_kind_name(tw.kind) << " stages=" << tw.stages.size() - 1 << "\n";
  os << "bounds " << tw.bounds.str() << "\n";
  for (const auto &r : tw.reports) os << r.str() << "\n";
  return os.str();
}

} // namespace

int cli_dispatch(int argc, char **argv) {
  CLI::App app{"Globular theories: towers, laws and cell catalogs"};
  app.require_subcommand(1);

  FragmentBounds bounds;
  std::string mode = "ic";
  int stages = 2;

  auto *build = app.add_subcommand("build", "build a tower and print its stage reports");
  std::string out_dir;
  build->add_option("--mode", mode, "fc, ic or strict")->check(CLI::IsMember({"fc", "ic", "strict"}));
  build->add_option("--stages", stages, "number of stages");
  build->add_option("--out", out_dir, "directory for tower.txt and stage-<n>.thy");
  add_bounds(build, bounds);

  auto *verify = app.add_subcommand("verify", "check a law on the base theory");
  std::string law_arg, indices, weak_mode = "weak";
  bool verbose = false;
  verify->add_option("--law", law_arg, "law or family name")->required();
  verify->add_option("--indices", indices, "comma separated parameters");
  verify->add_option("--mode", weak_mode, "weak or strict")->check(CLI::IsMember({"weak", "strict"}));
  verify->add_flag("--verbose", verbose, "list passing generators too");
  add_bounds(verify, bounds);

  auto *catalog = app.add_subcommand("catalog", "list generators with recognized names");
  bool named_only = false;
  catalog->add_option("--mode", mode, "fc, ic or strict")->check(CLI::IsMember({"fc", "ic", "strict"}));
  catalog->add_option("--stages", stages, "number of stages");
  catalog->add_flag("--named-only", named_only, "only rows with a label");
  add_bounds(catalog, bounds);

  auto *hom = app.add_subcommand("hom", "maps of pasting schemes or strict cell counts");
  std::string arity, target, tower_dir;
  bool strict = false;
  int dim = 1;
  hom->add_option("--arity", arity, "source table, e.g. (1,0,1)")->required();
  hom->add_option("--target", target, "target table");
  hom->add_flag("--strict", strict, "count cells of the free strict groupoid");
  hom->add_option("--dim", dim, "cell dimension for --strict");
  hom->add_option("--tower", tower_dir, "directory written by build --mode=strict");
  add_bounds(hom, bounds);

  auto *pairs = app.add_subcommand("pairs", "list admissible pairs of a stage");
  int pair_dim = 0, stage = 0;
  pairs->add_option("--dim", pair_dim, "pair dimension k")->required();
  pairs->add_option("--stage", stage, "stage of the tower (0 = base theory)");
  pairs->add_option("--mode", mode, "fc, ic or strict")->check(CLI::IsMember({"fc", "ic", "strict"}));
  add_bounds(pairs, bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    bounds.validate();
    if (build->parsed()) {
      Tower tw = build_tower(parse_tower_kind(mode), stages, bounds);
      std::cout << tower_header(tw);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "tower.txt", serialize_tower(tw));
        for (std::size_t s = 0; s < tw.stages.size(); ++s)
          write_file(fs::path(out_dir) / ("stage-" + std::to_string(s) + ".thy"),
                     serialize_theory(*tw.stages[s], static_cast<int>(s)));
      }
      return 0;
    }
    if (verify->parsed()) {
      auto T = Theory::base(weak_mode == "strict" ? Mode::Strict : Mode::Weak, bounds);
      bool all = true;
      for (Law l : law_family(law_arg)) {
        auto params = indices.empty() ? default_params(l) : parse_indices(indices);
        LawCheckReport r = verify_law(l, params, T);
        std::cout << r.str(verbose);
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
    if (catalog->parsed()) {
      Tower tw = build_tower(parse_tower_kind(mode), stages, bounds);
      std::cout << catalog_tsv(identify_cells(tw), named_only);
      return 0;
    }
    if (hom->parsed()) {
      Table p = parse_table(arity);
      if (strict) {
        StrictHomTable t = strict_hom_table(p, dim);
        std::cout << "strict arity=" << p.str() << " dim=" << dim
                  << " count=" << t.counts[dim] << "\n";
        for (std::size_t m = 0; m < t.counts.size(); ++m)
          std::cout << "level " << m << " cells=" << t.counts[m] << "\n";
        if (tower_dir.empty()) return 0;
        Tower tw = parse_tower(read_file(fs::path(tower_dir) / "tower.txt"));
        LawCheckReport r = crosscheck_strict(tw, p, dim);
        std::cout << r.str(true);
        if (!r.conclusive) return 3;
        return r.pass ? 0 : 1;
      }
      if (target.empty()) throw std::invalid_argument("hom needs --target or --strict");
      auto maps = theta_hom(p, parse_table(target));
      std::cout << "hom " << p.str() << " " << parse_table(target).str()
                << " count=" << maps.size() << "\n";
      for (const auto &f : maps) std::cout << f.str() << "\n";
      return 0;
    }
    if (pairs->parsed()) {
      Theory::Ptr T;
      if (stage == 0) {
        T = Theory::base(mode == "strict" ? Mode::Strict : Mode::Weak, bounds);
      } else {
        Tower tw = build_tower(parse_tower_kind(mode), stage, bounds);
        T = tw.stages.back();
      }
      auto ps = T->pairs(pair_dim);
      std::cout << "pairs " << ps.size() << "\n";
      for (const auto &p : ps) std::cout << p.str() << "\n";
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

} // namespace globth
