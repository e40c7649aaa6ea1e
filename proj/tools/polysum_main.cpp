#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polysum/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_mode(const std::string& config_path, const std::string& out_dir, int threads,
             std::uint64_t seed_offset, std::initializer_list<polysum::Mode> allowed,
             const char* subcommand) {
  const auto cfg = polysum::parse_config(read_file(config_path));
  bool mode_ok = false;
  for (const auto m : allowed) mode_ok = mode_ok || (cfg.mode == m);
  if (!mode_ok) {
    std::cerr << "config mode '" << polysum::mode_name(cfg.mode)
              << "' does not match subcommand '" << subcommand << "'\n";
    return 2;
  }
  polysum::RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.threads = threads;
  opts.seed_offset = seed_offset;
  const auto rep = polysum::run_experiment(cfg, opts);
  std::cout << "wrote " << rep.manifest.size() << " files under " << rep.out_dir.string()
            << "\n"
            << (rep.passed ? "PASS" : "FAIL") << ": " << cfg.name << "\n";
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation lab for zeros of sums of random polynomials with iid roots"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed_offset = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out-dir", out_dir, "output directory (overrides config)");
    sub->add_option("--threads", threads, "worker threads (default: hardware)");
    sub->add_option("--seed-offset", seed_offset,
                    "shift all seeds for replication studies");
  };

  auto* simulate = app.add_subcommand(
      "simulate", "run a light-tail or heavy-tail simulation experiment");
  add_common(simulate);
  auto* limit = app.add_subcommand("limit", "extract the limit measure only");
  add_common(limit);
  auto* validate =
      app.add_subcommand("validate", "run the Poisson-Jensen / counting-identity suites");
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_mode(config_path, out_dir, threads, seed_offset,
                      {polysum::Mode::light_tail, polysum::Mode::heavy_tail}, "simulate");
    }
    if (limit->parsed()) {
      return run_mode(config_path, out_dir, threads, seed_offset,
                      {polysum::Mode::limit_only}, "limit");
    }
    if (validate->parsed()) {
      return run_mode(config_path, out_dir, threads, seed_offset,
                      {polysum::Mode::validate}, "validate");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
