// Restriction sampling and application.

#include <iostream>

#include <CLI11.hpp>

#include "immlab/serialize.hpp"
#include "tool_io.hpp"

using namespace immlab;

int main(int argc, char** argv) {
  CLI::App app{"variable restrictions: sample and apply"};
  app.require_subcommand(1);

  int d = 4;
  std::uint64_t seed = 0;
  bool as_json = false;
  CLI::App* sample = app.add_subcommand("sample", "sample a restriction");
  sample->add_option("--d", d, "number of layers")->required();
  sample->add_option("--seed", seed, "rng seed")->required();
  sample->add_flag("--json", as_json, "emit the JSON schema");

  std::string rho_path, poly_path;
  std::uint64_t prime = kDefaultPrime;
  CLI::App* apply =
      app.add_subcommand("apply", "apply a restriction to a polynomial");
  apply->add_option("--rho", rho_path, "restriction JSON file")->required();
  apply->add_option("--poly", poly_path, "polynomial file ('-' = stdin)")
      ->required();
  apply->add_option("--prime", prime, "field modulus");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sample->parsed()) {
      SplitMix64 rng(seed);
      RestrictionRho rho = sample_restriction(d, rng);
      if (as_json) {
        std::cout << rho_to_json(rho).dump(2) << "\n";
      } else {
        std::cout << "pi:";
        for (int v : rho.pi) std::cout << " " << v;
        std::cout << "\na:";
        for (int v : rho.a) std::cout << " " << v;
        std::cout << "\n|Y| = " << rho.y_count << ", |Z| = " << rho.z_count
                  << ", m = " << rho.m << "\n";
        for (std::size_t i = 0; i < rho.map.size(); ++i)
          std::cout << var_name(VarId{Ns::X, static_cast<std::uint32_t>(i)})
                    << " -> " << target_to_json(rho.map[i]).get<std::string>()
                    << "\n";
      }
    } else if (apply->parsed()) {
      RestrictionRho rho = rho_from_json(
          nlohmann::json::parse(tool::read_input(rho_path)));
      Polynomial p =
          parse_poly(tool::trimmed(tool::read_input(poly_path)), prime);
      std::cout << poly_to_string(apply_to_polynomial(p, rho)) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
