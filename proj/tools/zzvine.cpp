// Command-line front end: barcodes, scripted updates, vineyards, benchmarks.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "zzvine/dpc.hpp"
#include "zzvine/errors.hpp"
#include "zzvine/filtration.hpp"
#include "zzvine/fzz.hpp"
#include "zzvine/planner.hpp"
#include "zzvine/rep_updates.hpp"

using namespace zzvine;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitUnsupported = 3;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open " + path);
  return in;
}

ZigzagFiltration read_filtration(const std::string& path, RegistryPtr reg = nullptr) {
  auto in = open_input(path);
  auto f = parse_filtration(in, std::move(reg));
  require_valid(f);
  return f;
}

std::vector<Op> read_script(const std::string& path) {
  auto in = open_input(path);
  return parse_script(in);
}

Trajectories read_points(const std::string& path) {
  auto in = open_input(path);
  return parse_trajectories(in);
}

// ---- update

struct UpdateArgs {
  std::string filtration, script, engine = "rep";
  bool check = false;
};

int cmd_update(const UpdateArgs& a) {
  auto f = read_filtration(a.filtration);
  auto ops = read_script(a.script);
  const bool use_rep = a.engine != "fzz";
  const bool use_fzz = a.engine != "rep";
  std::optional<PersistenceState> rep;
  std::optional<FzzState> fzz;
  if (use_rep) rep.emplace(PersistenceState::build(f));
  if (use_fzz) fzz.emplace(f);

  std::string out;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Op& op = ops[k];
    out += "op " + std::to_string(k) + " " + format_op(op) + "\n";
    // fzz first so an unsupported op leaves nothing half applied
    if (fzz) fzz->apply(op);
    if (rep) {
      auto res = rep->apply(op);
      for (const auto& v : res.vines) {
        if (v.from == kNoInterval) out += "vine + " + std::to_string(v.to) + "\n";
        else out += "vine - " + std::to_string(v.from) + "\n";
      }
    }
    if (rep && fzz && rep->barcode() != fzz->barcode())
      throw Error(ErrorKind::Validation, "engines disagree after op " + std::to_string(k), static_cast<int>(k));
    if (a.check) {
      const auto& cur = rep ? rep->filtration() : fzz->filtration();
      Barcode oracle = barcode_from_scratch(cur);
      if ((rep && rep->barcode() != oracle) || (fzz && fzz->barcode() != oracle))
        throw Error(ErrorKind::Validation, "barcode differs from scratch after op " + std::to_string(k),
                    static_cast<int>(k));
    }
  }
  out += "final\n";
  out += format_barcode(rep ? rep->barcode() : fzz->barcode());
  std::cout << out;
  return 0;
}

// ---- bench

struct BenchArgs {
  std::string points_file;
  int points = 8, samples = 20, space_dim = 2, dim_cap = 2;
};

int cmd_bench(const BenchArgs& a, std::uint64_t seed) {
  Trajectories tr;
  if (!a.points_file.empty()) {
    tr = read_points(a.points_file);
  } else {
    std::mt19937_64 rng(seed);
    tr = random_trajectories(rng, a.points, a.samples, a.space_dim);
  }
  VineyardOptions opt;
  opt.dim_cap = a.dim_cap;
  opt.time_scratch = true;
  auto v = vineyard(tr, opt);
  const auto& s = v.stats;
  std::printf("points samples bands fw_sw bw_sw ow_sw iw_sw ow_exp iw_exp ow_con iw_con MLen T_UP T_FS ratio\n");
  std::printf("%d %d %zu", tr.points(), tr.samples(), v.bands.size());
  for (auto c : s.op_counts) std::printf(" %zu", c);
  double ratio = s.t_scratch > 0 ? s.t_update / s.t_scratch : 0.0;
  std::printf(" %d %.6f %.6f %.4f\n", s.max_length, s.t_update, s.t_scratch, ratio);
  if (s.fallbacks > 0) std::fprintf(stderr, "note: %d band(s) used the generic transform script\n", s.fallbacks);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zigzag persistence under atomic filtration edits"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for every random choice");

  std::string barcode_file;
  auto* barcode = app.add_subcommand("barcode", "barcode of a filtration file, from scratch");
  barcode->add_option("filtration", barcode_file)->required();

  UpdateArgs up;
  auto* update = app.add_subcommand("update", "apply an op script, print per-op vines and the final barcode");
  update->add_option("filtration", up.filtration)->required();
  update->add_option("script", up.script)->required();
  update->add_option("--engine", up.engine, "rep, fzz or both")->check(CLI::IsMember({"rep", "fzz", "both"}));
  update->add_flag("--check", up.check, "compare with a from-scratch barcode after every op");

  std::string points_file;
  VineyardOptions vopt;
  auto* vine = app.add_subcommand("vineyard", "vineyard of a point-trajectory CSV");
  vine->add_option("points", points_file)->required();
  vine->add_option("--dim-cap", vopt.dim_cap, "largest simplex dimension")->check(CLI::NonNegativeNumber);
  vine->add_option("--check-every", vopt.check_every, "check every k-th band against the oracle")
      ->check(CLI::NonNegativeNumber);

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "op counts and update vs from-scratch time over a vineyard");
  bench->add_option("csv", ba.points_file, "trajectory CSV; random points when omitted");
  bench->add_option("--points", ba.points, "random point count")->check(CLI::NonNegativeNumber);
  bench->add_option("--samples", ba.samples, "random sample count")->check(CLI::NonNegativeNumber);
  bench->add_option("--space-dim", ba.space_dim)->check(CLI::IsMember({2, 3}));
  bench->add_option("--dim-cap", ba.dim_cap)->check(CLI::NonNegativeNumber);

  int gp_points = 5, gp_samples = 10, gp_dim = 2;
  auto* gen_points = app.add_subcommand("gen-points", "random trajectories as CSV");
  gen_points->add_option("--points", gp_points)->check(CLI::NonNegativeNumber);
  gen_points->add_option("--samples", gp_samples)->check(CLI::NonNegativeNumber);
  gen_points->add_option("--space-dim", gp_dim)->check(CLI::IsMember({2, 3}));

  RandomOptions ro;
  auto* gen_filt = app.add_subcommand("gen-filtration", "random valid filtration");
  gen_filt->add_option("--vertices", ro.vertices)->check(CLI::PositiveNumber);
  gen_filt->add_option("--max-dim", ro.max_dim)->check(CLI::NonNegativeNumber);
  gen_filt->add_option("--max-complex", ro.max_complex)->check(CLI::PositiveNumber);
  gen_filt->add_option("--max-length", ro.max_length)->check(CLI::NonNegativeNumber);

  std::string gs_file;
  int gs_count = 20;
  auto* gen_script = app.add_subcommand("gen-script", "random legal op script for a filtration");
  gen_script->add_option("filtration", gs_file)->required();
  gen_script->add_option("-k,--count", gs_count)->check(CLI::NonNegativeNumber);

  std::string tf_from, tf_to;
  auto* trans = app.add_subcommand("transform", "op script taking one filtration to another");
  trans->add_option("from", tf_from)->required();
  trans->add_option("to", tf_to)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*barcode) {
      std::cout << format_barcode(barcode_from_scratch(read_filtration(barcode_file)));
    } else if (*update) {
      return cmd_update(up);
    } else if (*vine) {
      std::cout << format_vineyard(vineyard(read_points(points_file), vopt));
    } else if (*bench) {
      return cmd_bench(ba, seed);
    } else if (*gen_points) {
      std::mt19937_64 rng(seed);
      std::cout << format_trajectories(random_trajectories(rng, gp_points, gp_samples, gp_dim));
    } else if (*gen_filt) {
      std::mt19937_64 rng(seed);
      std::cout << format_filtration(random_filtration(rng, ro));
    } else if (*gen_script) {
      std::cout << format_script(random_script(read_filtration(gs_file), gs_count, seed));
    } else if (*trans) {
      auto f1 = read_filtration(tf_from);
      auto f2 = read_filtration(tf_to, f1.registry_ptr());
      std::cout << format_script(transform(f1, f2));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::UnsupportedOnFzzPath ? kExitUnsupported : kExitInvalid;
  }
  return 0;
}
