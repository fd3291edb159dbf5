#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "potions/problem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"relevance, potions, atlases and twists for multigraded rings"};
  std::string input_path = "-";
  long bound = 12;
  bool quiet = false;
  std::string format = "json";
  app.add_option("input", input_path, "problem file ('-' for standard input)");
  app.add_option("--bound", bound,
                 "exponent budget for expressibility searches");
  app.add_flag("--quiet", quiet, "omit the echoed problem from the output");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  CLI11_PARSE(app, argc, argv);

  try {
    potions::ProblemSpec spec;
    try {
      if (input_path == "-") {
        spec = potions::parse_problem(std::cin);
      } else {
        std::ifstream in(input_path);
        if (!in) {
          std::cerr << "error: cannot open '" << input_path << "'\n";
          return 2;
        }
        spec = potions::parse_problem(in);
      }
    } catch (const potions::Error& e) {
      if (e.kind() == potions::ErrorKind::Internal) throw;
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }

    potions::RunOptions opts;
    opts.bound = bound;
    opts.echo_problem = !quiet;
    auto outcome = potions::run_problem(spec, opts);
    if (format == "json") {
      std::cout << outcome.document.dump(2) << "\n";
    } else {
      std::cout << potions::render_text(outcome.document);
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
