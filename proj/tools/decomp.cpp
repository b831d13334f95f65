// Product/simple decomposition of an alternating-shape formula.

#include <iostream>

#include <CLI11.hpp>

#include "immlab/serialize.hpp"
#include "tool_io.hpp"

using namespace immlab;

int main(int argc, char** argv) {
  CLI::App app{"decompose a multilinear alternating formula into product and "
               "simple terms"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "run the decomposition");
  std::string input, emit_terms;
  std::uint64_t prime = kDefaultPrime;
  DecompParams params;
  int threshold = -1, p_bound = -1;
  run->add_option("--input", input, "formula file ('-' = stdin)")->required();
  run->add_option("--t", params.t, "product fan-in threshold")->required();
  run->add_option("--r", params.r, "simple-term parameter")->required();
  run->add_option("--threshold", threshold,
                  "Vars trigger for simple terms (default 400r)");
  run->add_option("--p-bound", p_bound,
                  "Vars cap for the inner recursion (default 400r)");
  run->add_option("--emit-terms", emit_terms, "write the term list as JSON");
  run->add_option("--prime", prime, "field modulus");

  CLI11_PARSE(app, argc, argv);
  try {
    params.support_threshold = threshold >= 0 ? threshold : 400 * params.r;
    params.p_bound = p_bound >= 0 ? p_bound : 400 * params.r;
    Formula f =
        parse_formula_sexp(tool::trimmed(tool::read_input(input)), prime);
    VarSet ambient = compute_supp(f)[f.root()];
    Decomposition dec = decompose(f, params, ambient);
    bool exact = decomposition_sum(dec, prime) == evaluate_to_polynomial(f);
    nlohmann::json summary = {
        {"products", dec.products.size()},
        {"simples", dec.simples.size()},
        {"source_size", dec.source_size},
        {"sum_matches_input", exact},
    };
    std::cout << summary.dump(2) << "\n";
    if (!emit_terms.empty())
      tool::write_output(emit_terms,
                         decomposition_to_json(dec, ambient).dump(2) + "\n");
    return exact ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
