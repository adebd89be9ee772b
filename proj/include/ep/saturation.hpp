// Preprocessing pipeline, given-clause saturation and proof reconstruction.

#ifndef EP_SATURATION_HPP
#define EP_SATURATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ep/calculus.hpp"
#include "ep/clauses.hpp"
#include "ep/cnf.hpp"
#include "ep/tptp.hpp"

namespace ep {

struct ProverConfig {
  double timeLimit = 60.0;  // seconds
  uint32_t unifDepth = 8;
  uint32_t unifiersPerInference = 4;
  uint32_t psLimit = 3;
  /// Weight-ordered picks per age-ordered pick.
  uint32_t weightPicksPerAgePick = 5;
  bool inj = true;
  bool flexFlexRule = false;
  /// 0 means unbounded.
  uint64_t maxIterations = 0;
  PreprocessConfig preprocess;
};

/// A formula or clause in the derivation graph.
struct DerivationNode {
  uint64_t id = 0;
  std::string role = "plain";
  bool isClause = false;
  Term formula;  // formula nodes
  Clause clause;  // clause nodes
  /// Empty rule for input formulas.
  RuleApplication app;
  std::string sourceName;  // input formulas
  bool fromConjecture = false;
};

struct ProofStats {
  uint64_t iterations = 0;
  uint64_t generated = 0;
  uint64_t processed = 0;
};

struct ProverResult {
  SzsStatus status = SzsStatus::GaveUp;
  std::map<uint64_t, DerivationNode> nodes;
  /// Refutation nodes in topological order (empty unless refuted).
  std::vector<uint64_t> proof;
  /// The replay checker accepted every proof step.
  bool proofChecked = false;
  std::string checkFailure;
  ProofStats stats;
};

ProverResult prove(const Problem& problem, const ProverConfig& config = {});

/// Saturates a clause set directly, skipping preprocessing. Input clauses
/// must already be in normal form.
ProverResult saturate(const std::vector<Clause>& clauses, const ProverConfig& config = {});

/// Ancestors of `emptyId` (inclusive), sorted by id.
std::vector<uint64_t> extractProof(const std::map<uint64_t, DerivationNode>& nodes, uint64_t emptyId);

/// Theorem if the refutation uses the negated conjecture, ContradictoryAxioms
/// if a conjecture exists but is unused, Unsatisfiable otherwise.
SzsStatus classifyRefutation(const std::map<uint64_t, DerivationNode>& nodes, uint64_t emptyId,
                             bool hasConjecture);

/// Replays every step of the proof. Returns an empty string on success,
/// otherwise a description of the first failing step.
std::string checkProof(const ProverResult& result, const Problem& problem, const PreprocessConfig& pre = {});

/// TSTP certificate between SZS output markers.
std::string renderProof(const ProverResult& result, const Problem& problem);

}  // namespace ep

#endif  // EP_SATURATION_HPP
