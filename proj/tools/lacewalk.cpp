#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "lacewalk/app.hpp"
#include "lacewalk/enumerate.hpp"

namespace {

/// Accepts integers written as 1000000, 1e6 or 2.5e5.
std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0) || v > 1.8e19 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
    throw lacewalk::app::ConfigError("count '" + text + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lacewalk::app;

  CLI::App cli{"Weighted walk enumeration, lace expansion kernels and estimates"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<int> nmax, n, max_lace, truncation;
  std::optional<std::uint64_t> seed, budget;
  std::optional<unsigned> threads;
  std::optional<double> mu;
  std::optional<std::string> out, count;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (JSON)")->required();
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--budget", budget, "node budget");
    sub->add_option("--out", out, "output directory");
  };
  auto* enumerate = cli.add_subcommand("enumerate", "exact C_n(x) for n <= nmax");
  common(enumerate);
  enumerate->add_option("--nmax", nmax);

  auto* lace = cli.add_subcommand("lace", "lace kernels Pi_m^(N) for m <= n");
  common(lace);
  lace->add_option("--n", n);
  lace->add_option("--max-lace", max_lace, "largest lace size kept");

  auto* verify = cli.add_subcommand("verify", "run all checks up to nmax");
  common(verify);
  verify->add_option("--nmax", nmax);

  auto* series = cli.add_subcommand("series", "connective constant and diffusion constant estimates");
  common(series);
  series->add_option("--nmax", nmax);
  series->add_option("--truncation", truncation, "lace expansion truncation N");
  series->add_option("--mu", mu, "override the critical point estimate");

  auto* sample = cli.add_subcommand("sample", "Monte Carlo estimate of c_n");
  common(sample);
  sample->add_option("--n", n)->required();
  sample->add_option("--count", count, "number of walks, e.g. 1e6");
  sample->add_option("--seed", seed);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = cli.get_subcommands().front()->get_name();
  try {
    CommandOptions options;
    options.nmax = nmax;
    options.n = n;
    options.max_lace = max_lace;
    options.truncation = truncation;
    options.seed = seed;
    options.budget = budget;
    options.threads = threads;
    options.mu = mu;
    options.out = out;
    if (count) options.count = parse_count(*count);
    const RunConfig config = load_config(config_path);
    const RunResult result = run(command, config, options);
    std::cout << result.summary << "\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "lacewalk: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lacewalk::BudgetExceeded& e) {
    std::cerr << "lacewalk: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "lacewalk: " << command << " failed: " << e.what() << "\n";
    return kExitFailed;
  }
}
