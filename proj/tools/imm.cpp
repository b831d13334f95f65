// Iterated-matrix-product builders: the polynomial itself, the
// divide-and-conquer formulas/circuits, and the size table.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "immlab/imm.hpp"
#include "immlab/transform.hpp"
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
  CLI::App app{"iterated 2x2 matrix product constructions"};
  app.require_subcommand(1);
  std::uint64_t prime = kDefaultPrime;
  app.add_option("--prime", prime, "field modulus");

  int d = 4, delta = 1;
  bool circuit = false;
  CLI::App* poly = app.add_subcommand("poly", "the polynomial, text format");
  poly->add_option("--d", d, "number of layers")->required();

  CLI::App* build =
      app.add_subcommand("build", "divide-and-conquer formula, s-expression");
  build->add_option("--d", d, "number of layers")->required();
  build->add_option("--delta", delta, "product depth")->required();
  build->add_flag("--circuit", circuit,
                  "share block entries (expanded to a tree for printing)");

  std::string d_list = "4,8,16", delta_list = "1,2,3,4";
  CLI::App* sizes = app.add_subcommand("sizes", "size table, CSV");
  sizes->add_option("--d-list", d_list, "comma-separated d values");
  sizes->add_option("--delta-list", delta_list,
                    "comma-separated product depths");

  CLI11_PARSE(app, argc, argv);
  try {
    if (poly->parsed()) {
      std::cout << poly_to_string(imm_polynomial(d, prime)) << "\n";
    } else if (build->parsed()) {
      Formula f = circuit ? build_dc_circuit(d, delta, prime)
                          : build_dc_formula(d, delta, prime);
      std::cout << formula_to_sexp(circuit ? circuit_to_formula(f) : f)
                << "\n";
    } else if (sizes->parsed()) {
      std::cout << "d,delta,formula_size,circuit_size,leaves\n";
      for (const SizeRow& r :
           size_table(parse_int_list(d_list), parse_int_list(delta_list)))
        std::cout << r.d << "," << r.delta << "," << r.formula_size << ","
                  << r.circuit_size << "," << r.leaves << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
