// Generating and simplifying inference rules.

#ifndef EP_CALCULUS_HPP
#define EP_CALCULUS_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ep/clauses.hpp"
#include "ep/cnf.hpp"
#include "ep/terms.hpp"
#include "ep/unify.hpp"

namespace ep {

class RuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A literal side: literal index plus which side of the equation.
struct LitSide {
  uint32_t literal = 0;
  bool right = false;
  bool operator==(const LitSide&) const = default;
};

/// One rule instance. `produced` is reproducible from the premises by
/// replay() up to variable renaming.
struct RuleApplication {
  std::string rule;
  std::string status = "thm";
  std::vector<uint64_t> premises;
  std::vector<LitSide> sites;
  Position position;
  Substitution bindings;
  /// Argument applied by func_ext.
  Term witness;
  /// Symbols created by this step, in creation order.
  std::vector<SymbolId> introduced;
  /// Trailing literals of `produced` that are fresh unification constraints.
  uint32_t constraints = 0;
  Clause produced;
};

// ---------------------------------------------------------------------------
// Primary rules

/// Para: rewrite `site` side of C at `pos` with the equation at `from` in D
/// (from.right selects r -> l). D is renamed apart first.
RuleApplication para(const Clause& c, LitSide site, const Position& pos, const Clause& d, LitSide from);
/// Skips positive propositional pairs and top-level rewriting of a variable.
bool paraPermitted(const Clause& c, LitSide site, const Position& pos, const Clause& d, LitSide from);
/// Every permitted Para inference from D into C.
std::vector<RuleApplication> paraInferences(const Clause& c, const Clause& d);

/// EqFac on literals i and j (j.right swaps j's sides).
RuleApplication eqfac(const Clause& c, uint32_t i, LitSide j);
std::vector<RuleApplication> eqfacInferences(const Clause& c);

/// Heads used by primitive substitution.
struct PrimSubstHeads {
  /// Instance types for Pi and =.
  std::vector<Type> types;
};
/// Literal i must have a free-variable head with result type o. Returns
/// the Bind-solved instance per general binding.
std::vector<RuleApplication> primSubst(const Clause& c, uint32_t i, const PrimSubstHeads& heads);

// ---------------------------------------------------------------------------
// Extensionality

/// PBE for positive, NBE for negative Boolean equations. Two conclusions.
std::vector<RuleApplication> boolExt(const Clause& c, uint32_t i);
/// PFE applies a fresh variable, NFE a fresh Skolem term over fv(C); a
/// given witness replaces the fresh term (used by replay).
RuleApplication funcExt(const Clause& c, uint32_t i, std::optional<Term> witness = std::nullopt);

/// [f X = f Y]^ff | [X = Y]^tt yields [finv (f Z) = Z]^tt, once per f.
std::optional<RuleApplication> injRule(const Clause& c, std::set<SymbolId>& inverted);

/// Values of a finite type: o and o > o. Throws RuleError otherwise.
std::vector<Term> finiteDomain(Type t);
std::vector<RuleApplication> exhaustiveInstantiate(const Clause& c, VarId x, Type t);

// ---------------------------------------------------------------------------
// Unification steps

/// Solves the literals at `constraintIndices` with up to `maxUnifiers`
/// pre-unifiers (pattern_uni when the problem is a pattern). Sets
/// `unsolvable` when the search space was exhausted without a unifier.
std::vector<RuleApplication> unifyConstraints(const Clause& c, const std::vector<uint32_t>& constraintIndices,
                                              const UnifConfig& cfg, size_t maxUnifiers, bool* unsolvable = nullptr,
                                              bool* boundReached = nullptr);

// ---------------------------------------------------------------------------
// Simplification

/// Size-based heuristic order on terms with ties broken by interned id.
bool termGreater(Term a, Term b);

struct SimplifyResult {
  std::optional<Clause> clause;  // absent when tautology
  bool tautology = false;
  bool changed = false;
  std::vector<uint64_t> unitsUsed;
  Substitution bindings;  // from destructive equality resolution
};

/// Triv deletion, destructive equality resolution, duplicate removal,
/// tautology detection, unit rewriting and unit cutting, to fixpoint.
SimplifyResult simplify(const Clause& c, const std::vector<Clause>& units);

// ---------------------------------------------------------------------------
// Replay

/// Re-runs the named rule on the premises and returns the conclusion.
/// Throws RuleError for unknown rules or malformed records.
Clause replay(const RuleApplication& app, const std::vector<Clause>& premises,
             const PreprocessConfig& pre = {});
/// replay() agrees with app.produced up to variable renaming.
bool replayMatches(const RuleApplication& app, const std::vector<Clause>& premises,
                   const PreprocessConfig& pre = {});

/// Replace constants by the mapped ones.
Term renameSymbols(Term t, const std::map<SymbolId, SymbolId>& m);
Clause renameSymbols(const Clause& c, const std::map<SymbolId, SymbolId>& m);

}  // namespace ep

#endif  // EP_CALCULUS_HPP
