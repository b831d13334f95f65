// Coefficient-matrix rank of a multilinear polynomial over Y/Z.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <json.hpp>

#include "immlab/rank.hpp"
#include "tool_io.hpp"

using namespace immlab;

static VarSet parse_var_list(const std::string& s) {
  VarSet out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(parse_var(item));
  return out;
}

int main(int argc, char** argv) {
  CLI::App app{"rank of the coefficient matrix M_(Y,Z)"};
  std::string poly_path, y_list, z_list;
  std::uint64_t prime = kDefaultPrime;
  std::uint64_t cross_prime = 0;
  app.add_option("--poly", poly_path, "polynomial file ('-' = stdin)")
      ->required();
  app.add_option("--y", y_list, "comma-separated row variables "
                                "(default: every y[_] in the support)");
  app.add_option("--z", z_list, "comma-separated column variables "
                                "(default: every z[_] in the support)");
  app.add_option("--prime", prime, "field modulus");
  app.add_option("--cross-prime", cross_prime,
                 "recompute under a second prime and require agreement");

  CLI11_PARSE(app, argc, argv);
  try {
    Polynomial p =
        parse_poly(tool::trimmed(tool::read_input(poly_path)), prime);
    CoeffMatrix m = (y_list.empty() && z_list.empty())
                        ? coefficient_matrix(p)
                        : coefficient_matrix(p, parse_var_list(y_list),
                                             parse_var_list(z_list));
    int r = rank(m);
    if (cross_prime >= 2) r = rank_cross_checked(p, cross_prime);
    nlohmann::json report = {{"rank", r},
                             {"rows", m.rows()},
                             {"cols", m.cols()},
                             {"active_y", m.y_vars.size()},
                             {"active_z", m.z_vars.size()},
                             {"prime", prime}};
    std::cout << report.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
