// Formula pass runner: normalize / check-ml / stats over the s-expression
// text format (default input: stdin).

#include <iostream>

#include <CLI11.hpp>

#include "immlab/imm.hpp"
#include "immlab/transform.hpp"
#include "tool_io.hpp"

using namespace immlab;

int main(int argc, char** argv) {
  CLI::App app{"formula passes over the s-expression format"};
  app.require_subcommand(1);
  std::string input = "-";
  std::uint64_t prime = kDefaultPrime;
  app.add_option("--input", input, "formula file ('-' = stdin)");
  app.add_option("--prime", prime, "field modulus");

  int delta = 1;
  CLI::App* normalize = app.add_subcommand(
      "normalize", "rewrite into alternating shape with exactly DELTA "
                   "products per path");
  normalize->add_option("--delta", delta, "target product depth")->required();

  CLI::App* check = app.add_subcommand(
      "check-ml", "check syntactic multilinearity; print a witness on "
                  "failure");
  CLI::App* stats = app.add_subcommand("stats", "structural statistics");
  // --input / --prime may appear after the subcommand too
  for (CLI::App* sub : {normalize, check, stats}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    Formula f =
        parse_formula_sexp(tool::trimmed(tool::read_input(input)), prime);
    if (normalize->parsed()) {
      std::cout << formula_to_sexp(normalize_to_alternating(f, delta)) << "\n";
    } else if (check->parsed()) {
      MlWitness w = check_syntactic_multilinear(f);
      if (w.ok) {
        std::cout << "syntactic-multilinear: yes\n";
      } else {
        std::cout << "syntactic-multilinear: no (gate " << w.gate
                  << " shares " << var_name(w.shared) << ")\n";
        return 1;
      }
    } else if (stats->parsed()) {
      std::cout << "size: " << f.size() << "\n"
                << "leaves: " << leaf_count(f) << "\n"
                << "product-depth: " << product_depth(f) << "\n"
                << "tree: " << (f.is_tree() ? "yes" : "no") << "\n"
                << "supp: " << compute_supp(f)[f.root()].size()
                << " variables\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
