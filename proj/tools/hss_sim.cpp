// Command line driver for parameter sweeps.
#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <exception>
#include <iostream>
#include <sstream>

#include "hss/experiment.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum sharing sweeps for hybrid satellite-terrestrial networks"};
  std::string config_path;
  std::string out_dir = "hss_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> topologies;
  std::optional<int> threads;
  std::string schemes;
  bool quiet = false;
  app.add_option("--config", config_path, "Flat JSON config file (defaults are used when omitted)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--schemes", schemes, "Comma-separated list: proposed,nosharing,rand,partial_pre,finesync");
  app.add_option("--topologies", topologies, "Number of topologies")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("-q,--quiet", quiet, "Do not print progress");
  CLI11_PARSE(app, argc, argv);

  try {
    hss::ExperimentConfig cfg = config_path.empty() ? hss::ExperimentConfig{} : hss::ExperimentConfig::load(config_path);
    if (seed) cfg.seed = *seed;
    if (topologies) cfg.topologies = *topologies;
    if (threads) cfg.threads = *threads;
    if (!schemes.empty()) {
      cfg.schemes.clear();
      for (const auto& name : split_list(schemes)) cfg.schemes.push_back(hss::parse_scheme(name));
    }
    cfg.validate();

    hss::ExperimentHooks hooks;
    if (!quiet)
      hooks.progress = [](int topology, int done, int total) {
        std::fprintf(stderr, "topology %d finished (%d/%d)\n", topology, done, total);
      };
    const hss::ExperimentResult result = hss::run_experiment(cfg, hooks);
    hss::write_outputs(result, out_dir);
    std::cout << hss::summary_text(hss::summarize(result.records));
    if (result.failures > 0) {
      std::cerr << result.failures << " sweep cell(s) failed; see records.csv\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
