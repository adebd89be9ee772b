// ep-prover: saturation-based theorem prover for higher-order logic.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ep/modal.hpp"
#include "ep/saturation.hpp"

namespace {

int exitCode(ep::SzsStatus s) {
  switch (s) {
    case ep::SzsStatus::Theorem:
    case ep::SzsStatus::Unsatisfiable:
    case ep::SzsStatus::ContradictoryAxioms:
    case ep::SzsStatus::CounterSatisfiable:
    case ep::SzsStatus::Satisfiable:
      return 0;
    case ep::SzsStatus::Error:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturation-based theorem prover for classical higher-order logic"};
  std::string path;
  double timeout = 60;
  bool proof = false;
  ep::ProverConfig cfg;
  std::string s5 = "relational";
  std::string includeDir;
  uint64_t seed = 0;
  bool noInj = false;
  app.add_option("problem", path, "TPTP THF problem file")->required();
  app.add_option("-t,--timeout", timeout, "Time limit in seconds")->check(CLI::PositiveNumber);
  app.add_flag("-p,--proof", proof, "Print a TSTP proof certificate");
  app.add_option("--unif-depth", cfg.unifDepth, "Pre-unification depth budget");
  app.add_option("--unifiers", cfg.unifiersPerInference, "Unifiers kept per inference")->check(CLI::PositiveNumber);
  app.add_option("--ps-limit", cfg.psLimit, "Maximal primitive substitution depth");
  app.add_option("--modal-s5", s5, "Encoding of S5 accessibility")
      ->check(CLI::IsMember({"relational", "universal"}));
  app.add_option("--include-dir", includeDir, "Root for TPTP include directives");
  app.add_option("--seed", seed, "Reserved; the search is deterministic");
  app.add_flag("--no-inj", noInj, "Disable the injectivity rule");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << ep::printSzs(ep::SzsStatus::Error, path.empty() ? "unknown" : path) << "\n";
    app.exit(e);
    return 2;
  }
  cfg.timeLimit = timeout;
  cfg.inj = !noInj;
  std::string name = std::filesystem::path(path).filename().string();

  try {
    std::string classical;
    bool modal = false;
    {
      ep::ContextScope scope;
      ep::Problem input = ep::parseProblemFile(path, includeDir);
      modal = input.logicSpec || input.usesModalOperators();
      if (modal) {
        ep::EmbedOptions opts;
        opts.s5 = s5 == "universal" ? ep::S5Mode::Universal : ep::S5Mode::Relational;
        classical = ep::embed(input, opts).text;
      } else {
        ep::ProverResult r = ep::prove(input, cfg);
        std::cout << ep::printSzs(r.status, name) << "\n";
        if (proof && !r.proof.empty()) std::cout << ep::renderProof(r, input);
        return exitCode(r.status);
      }
    }
    ep::ContextScope scope;
    ep::ParseOptions opts;
    opts.problemName = name;
    ep::Problem problem = ep::parseProblem(classical, opts);
    ep::ProverResult r = ep::prove(problem, cfg);
    std::cout << ep::printSzs(r.status, name) << "\n";
    if (proof && !r.proof.empty()) std::cout << ep::renderProof(r, problem);
    return exitCode(r.status);
  } catch (const std::exception& e) {
    std::cout << ep::printSzs(ep::SzsStatus::Error, name) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
