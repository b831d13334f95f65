// Seeded term generators.

#include <iostream>

#include <CLI11.hpp>

#include "immlab/generators.hpp"
#include "immlab/serialize.hpp"
#include "tool_io.hpp"

using namespace immlab;

int main(int argc, char** argv) {
  CLI::App app{"random product/simple term generators"};
  app.require_subcommand(1);
  GeneratorSpec spec;
  std::uint64_t seed = 0;

  CLI::App* tproduct =
      app.add_subcommand("tproduct", "random product term, JSON");
  tproduct->add_option("--d", spec.d, "number of layers")->required();
  tproduct->add_option("--t", spec.parts, "factor count")->required();
  tproduct->add_option("--seed", seed, "rng seed")->required();
  tproduct->add_option("--density", spec.density,
                       "per-monomial keep probability");
  tproduct->add_option("--prime", spec.modulus, "field modulus");

  CLI::App* rsimple =
      app.add_subcommand("rsimple", "random simple term, JSON");
  rsimple->add_option("--d", spec.d, "number of layers")->required();
  rsimple->add_option("--r", spec.parts, "affine factor count")->required();
  rsimple->add_option("--seed", seed, "rng seed")->required();
  rsimple->add_option("--threshold", spec.support_threshold,
                      "coverage threshold (default 400r)");
  rsimple->add_option("--density", spec.density,
                      "per-monomial keep probability for the tail");
  rsimple->add_option("--prime", spec.modulus, "field modulus");

  CLI11_PARSE(app, argc, argv);
  try {
    spec.seed = seed;
    SplitMix64 rng(seed);
    VarSet ambient = full_x_set(spec.d);
    if (tproduct->parsed())
      std::cout << term_to_json(gen_t_product(spec, rng), ambient).dump(2)
                << "\n";
    else
      std::cout << term_to_json(gen_r_simple(spec, rng), ambient).dump(2)
                << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
