#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aires/commands.hpp"

namespace {

int exit_code_for(aires::errc c) {
  switch (c) {
    case aires::errc::parse_error:
    case aires::errc::unsupported_format:
    case aires::errc::io_error:
    case aires::errc::config_error:
      return 2;
    case aires::errc::insufficient_device_memory:
    case aires::errc::row_too_large:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"out-of-core SpGEMM and GCN workbench over a tiered-memory simulator"};
  app.require_subcommand(1);

  aires::ExperimentConfig cfg;
  std::string config_path;
  std::string in_path, out_path;
  std::uint64_t n_nodes = 0;
  double density = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "simulator config file (key=value)");
    sub->add_option("--budget", cfg.budgets, "device budget bytes, comma separated")
        ->delimiter(',');
    sub->add_option("--out", cfg.out_dir, "output directory (default .)");
  };

  CLI::App* conv = app.add_subcommand("convert", "Matrix Market file to binary container");
  conv->add_option("input", in_path, "input .mtx path")->required();
  conv->add_option("output", out_path, "output container path")->required();

  CLI::App* gen = app.add_subcommand("gen", "generate a random symmetric matrix");
  gen->add_option("--nodes", n_nodes, "matrix dimension")->required();
  gen->add_option("--density", density, "expected nnz fraction in (0,1]")->required();
  gen->add_option("--seed", cfg.seed, "RNG seed (default 1)");
  gen->add_option("output", out_path, "output container path")->required();

  CLI::App* mul = app.add_subcommand("multiply", "run the A*B budget/strategy sweep");
  mul->add_option("--a", cfg.a_path, "left operand (.mtx or container)")->required();
  mul->add_option("--b", cfg.b_path, "right operand, defaults to A");
  mul->add_option("--strategy", cfg.strategy, "aires|maxmemory|all (default all)");
  add_common(mul);

  CLI::App* gcn = app.add_subcommand("gcn", "forward one GCN layer out of core");
  gcn->add_option("--a", cfg.a_path, "adjacency (.mtx or container)")->required();
  gcn->add_option("--features", cfg.h_path, "feature matrix container; generated when absent");
  gcn->add_option("--weights", cfg.w_path, "dense weight file");
  gcn->add_option("--gen-weights", cfg.gen_weight_dim, "generate weights with this output dim");
  gcn->add_option("--feature-dim", cfg.feature_dims, "feature dims to sweep, comma separated")
      ->delimiter(',');
  gcn->add_option("--feature-sparsity", cfg.feature_sparsity,
                  "generated feature sparsity percent (default 99)");
  gcn->add_option("--seed", cfg.seed, "RNG seed (default 1)");
  gcn->add_option("--strategy", cfg.strategy, "aires|maxmemory|all (default all)");
  add_common(gcn);

  CLI::App* bench = app.add_subcommand("bench-merge", "merging overhead across budgets");
  bench->add_option("--a", cfg.a_path, "left operand (.mtx or container)")->required();
  bench->add_option("--b", cfg.b_path, "right operand, defaults to A");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (!config_path.empty()) cfg.sim = aires::load_config(config_path);
    if (conv->parsed()) {
      std::cout << aires::cmd_convert(in_path, out_path) << "\n";
      return 0;
    }
    if (gen->parsed()) {
      std::cout << aires::cmd_gen(n_nodes, density, cfg.seed, out_path) << "\n";
      return 0;
    }
    if (mul->parsed()) return aires::cmd_multiply(cfg, std::cout);
    if (gcn->parsed()) return aires::cmd_gcn(cfg, std::cout);
    return aires::cmd_bench_merge_overhead(cfg, std::cout);
  } catch (const aires::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
