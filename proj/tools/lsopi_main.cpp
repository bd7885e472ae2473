// Command-line front end: check, oracle and bracket.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lsopi/oracle.hpp"
#include "lsopi/report.hpp"
#include "lsopi/system_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitGenericity = 3;
constexpr int kExitInternal = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LSOPI_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring invalid LSOPI_SEED '" << env << "'\n";
    }
  }
  return lsopi::SamplerConfig{}.seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearization by one-fold prolongations for two-input control-affine systems"};
  app.require_subcommand(1);

  lsopi::SamplerConfig cfg;
  cfg.seed = default_seed();
  std::string file;
  bool json = false, trace = false;
  std::optional<std::size_t> max_steps;
  std::size_t depth = 3;
  std::vector<std::string> with;

  auto* check = app.add_subcommand("check", "Run the prolongation algorithm and print a report");
  check->add_option("FILE", file, "System file (YAML)")->required();
  check->add_flag("--json", json, "Emit the machine-readable report");
  check->add_flag("--trace", trace, "Show H generators, feedback and notes");
  check->add_option("--seed", cfg.seed, "Sampling seed (default 42 or $LSOPI_SEED)");
  check->add_option("--samples", cfg.samples, "Sample points per rank confirmation")->check(CLI::PositiveNumber);
  check->add_option("--max-steps", max_steps, "Step cap (default: state dimension)")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Brute-force search over raw prolongations");
  oracle->add_option("FILE", file, "System file (YAML)")->required();
  oracle->add_option("--depth", depth, "Maximum number of prolongations")->check(CLI::Range(0, 4));
  oracle->add_option("--seed", cfg.seed, "Sampling seed");

  auto* bracket = app.add_subcommand("bracket", "Print the Lie bracket of two system fields");
  bracket->add_option("FILE", file, "System file (YAML)")->required();
  bracket->add_option("--with", with, "Two of f, g1, g2")->expected(2)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    const lsopi::Sampler sampler(cfg);
    lsopi::ControlSystem sys = lsopi::parse_system(file, sampler);

    if (*check) {
      lsopi::RunOptions opt;
      opt.sampler = cfg;
      opt.max_steps = max_steps;
      auto rep = lsopi::run_lsopi(sys, opt);
      std::cout << (json ? lsopi::report_json(rep) : lsopi::report_text(rep, trace));
      return kExitOk;
    }

    if (*oracle) {
      auto w = lsopi::oracle::brute_force_lsop(sys, depth, sampler);
      if (!w) {
        std::cout << "no witness up to depth " << depth << "\n";
      } else {
        std::cout << "witness of length " << w->path.size() << ":";
        for (const auto& u : w->path) std::cout << " " << u;
        std::cout << "\n";
      }
      return kExitOk;
    }

    auto field = [&](const std::string& key) -> const lsopi::VectorField& {
      if (key == "f") return sys.f;
      if (key == "g1") return sys.g1;
      if (key == "g2") return sys.g2;
      throw lsopi::SpecError(0, "unknown field '" + key + "' (expected f, g1 or g2)");
    };
    auto b = lsopi::lie_bracket(field(with[0]), field(with[1]));
    std::cout << "[" << with[0] << ", " << with[1] << "] = (";
    for (std::size_t i = 0; i < b.size(); ++i) std::cout << (i ? ", " : "") << b[i].str(sys.states);
    std::cout << ")\n";
    return kExitOk;
  } catch (const lsopi::SpecError& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const lsopi::GenericityError& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return kExitGenericity;
  } catch (const lsopi::NonGenericPoint& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return kExitGenericity;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
