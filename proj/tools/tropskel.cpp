#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tropskel/commands.hpp"
#include "tropskel/errors.hpp"
#include "tropskel/factor.hpp"

using namespace tropskel;

namespace {

enum Exit { kOk = 0, kOther = 1, kPrecondition = 2, kBound = 3, kParse = 4 };

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

MixedHeights parse_heights(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("--heights: expected hm,hp");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berkovich skeleta of curves over Q((t)) via separating trees"};
  app.require_subcommand(1);
  app.fallthrough();

  int max_factor_degree = get_max_factor_degree();
  RunOptions run;
  bool verbose = false, seed_free = false;
  app.add_option("--max-factor-degree", max_factor_degree, "Largest degree passed to the factorizer")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-height-doublings", run.max_height_doublings, "Height doublings before giving up")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--seed-free", seed_free, "Assert a run without random choices (all algorithms are deterministic)");
  app.add_flag("-v,--verbose", verbose, "Step trace on stderr");

  std::string input, format = "json", chart, edge, heights = "4,2", height = "4", scale = "0", var = "s";
  std::optional<std::uint64_t> prime;

  auto* septree = app.add_subcommand("septree", "Separating tree of the branch locus");
  septree->add_option("input", input, "Input JSON")->required();
  septree->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));

  auto* puiseux = app.add_subcommand("puiseux", "Newton-Puiseux expansions in a disk chart");
  puiseux->add_option("input", input, "Input JSON")->required();
  puiseux->add_option("--chart", chart, "Disk B_k(c)")->required();
  puiseux->add_option("--height", height, "Roots modulo t^height");
  puiseux->add_option("--scale", scale, "Rescale roots y -> t^m y first");
  puiseux->add_option("--var", var, "Name of the chart coordinate");

  auto* mixed = app.add_subcommand("mixed", "Mixed expansions at both ends of an edge");
  mixed->add_option("input", input, "Input JSON")->required();
  mixed->add_option("--edge", edge, "Annulus S_{a,b}(c)")->required();
  mixed->add_option("--heights", heights, "hm,hp at the outer end; the inner end uses the same box");

  auto* skeleton = app.add_subcommand("skeleton", "Skeleton of the curve");
  skeleton->add_option("input", input, "Input JSON")->required();
  skeleton->add_option("--heights", height, "Initial height above the smallest root valuation");
  skeleton->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));

  auto* dedekind = app.add_subcommand("dedekind", "Dedekind cycle-type certificate");
  dedekind->add_option("polynomial", input, "Polynomial or input JSON")->required();
  dedekind->add_option("--prime", prime, "Prime for a polynomial over Z");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    set_max_factor_degree(max_factor_degree);
    if (verbose) run.trace = &std::cerr;
    if (*septree) {
      SeparatingTree t = run_septree(read_input(input), run);
      if (format == "dot")
        std::cout << to_dot(t);
      else
        emit(to_json(t));
    } else if (*puiseux) {
      emit(run_puiseux(read_input(input), chart, parse_rational(height), parse_rational(scale), var, run));
    } else if (*mixed) {
      emit(run_mixed(read_input(input), edge, parse_heights(heights), run));
    } else if (*skeleton) {
      Skeleton s = run_skeleton(read_input(input), parse_rational(height), run);
      if (format == "dot")
        std::cout << to_dot(s);
      else
        emit(to_json(s));
    } else if (*dedekind) {
      emit(run_dedekind(input, prime, run));
    }
    (void)seed_free;
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const BoundExceeded& e) {
    std::cerr << "bound exceeded: " << e.what() << '\n';
    return kBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
