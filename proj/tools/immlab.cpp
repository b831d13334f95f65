// Experiment harness: seeded Monte Carlo and exact experiments with JSON/CSV
// reports.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "immlab/experiments.hpp"
#include "tool_io.hpp"

using namespace immlab;

static std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int main(int argc, char** argv) {
  CLI::App app{"experiment harness"};
  CLI::App* exp = app.add_subcommand("exp", "run a named experiment");
  app.require_subcommand(1);

  std::string name;
  int d = 8, delta = 2, t = 2, r = 2, trials = 1000, threshold = -1;
  int rho_trials = 100;
  double density = 1.0;
  std::uint64_t seed = 0, prime = kDefaultPrime;
  std::string coloring = "layer", out_path, csv_path;
  std::string d_list = "4,8,16", delta_list = "1,2,3,4";
  exp->add_option("name", name,
                  "one of: full_rank, product_rank, simple_rank, color_paths, "
                  "decompose_roundtrip, size_table")
      ->required();
  exp->add_option("--d", d, "number of layers");
  exp->add_option("--delta", delta, "product depth");
  exp->add_option("--t", t, "product-term parameter");
  exp->add_option("--r", r, "simple-term parameter");
  exp->add_option("--trials", trials, "trial count");
  exp->add_option("--seed", seed, "rng seed");
  exp->add_option("--prime", prime, "field modulus");
  exp->add_option("--density", density, "generator density");
  exp->add_option("--threshold", threshold,
                  "simple-term coverage threshold (default 400r)");
  exp->add_option("--coloring", coloring, "color_paths: 'layer' or 'random:t'");
  exp->add_option("--rho-trials", rho_trials,
                  "decompose_roundtrip: sampled restrictions per term");
  exp->add_option("--d-list", d_list, "size_table: d values");
  exp->add_option("--delta-list", delta_list, "size_table: product depths");
  exp->add_option("--out", out_path, "write the JSON report here");
  exp->add_option("--csv", csv_path, "write per-trial records / rows as CSV");

  CLI11_PARSE(app, argc, argv);
  try {
    json report;
    if (name == "full_rank") {
      report = exp_full_rank(d, trials, seed, prime);
    } else if (name == "product_rank") {
      report = exp_product_rank(d, t, trials, seed, density, prime);
    } else if (name == "simple_rank") {
      report = exp_simple_rank(d, r, trials, seed,
                               threshold >= 0 ? threshold : 400 * r, density,
                               prime);
    } else if (name == "color_paths") {
      report = exp_color_paths(d, coloring, trials, seed);
    } else if (name == "decompose_roundtrip") {
      report = exp_decompose_roundtrip(d, delta, t, seed, rho_trials, prime);
    } else if (name == "size_table") {
      report =
          exp_size_table(parse_int_list(d_list), parse_int_list(delta_list));
    } else {
      std::cerr << "error: unknown experiment '" << name << "'\n";
      return 2;
    }
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      tool::write_output(out_path, text);
    if (!csv_path.empty()) tool::write_output(csv_path, report_csv(report));
    return report.at("pass").get<bool>() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
