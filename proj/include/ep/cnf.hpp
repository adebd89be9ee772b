// Preprocessing and clausification.

#ifndef EP_CNF_HPP
#define EP_CNF_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "ep/clauses.hpp"
#include "ep/terms.hpp"
#include "ep/tptp.hpp"

namespace ep {

struct PreprocessConfig {
  bool expandDefinitions = true;
  bool miniscope = true;
  bool replaceDefinedEq = true;
  /// Types enumerated by exhaustive instantiation; empty means {o, o>o}.
  std::vector<Type> exhaustiveInstTypes;
  /// A clause whose expansion would exceed this many clauses gets one of its
  /// literals renamed.
  size_t namingThreshold = 16;
};

class DefinitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Defined constant -> closed body.
using Definitions = std::map<SymbolId, Term>;

/// Collects `c = t` and `c <=> t` definitions. Other definition-role formulas
/// are left to be treated as axioms. Throws DefinitionError on cycles.
Definitions collectDefinitions(const Problem& p);
bool isDefinitionFormula(Term f);
Term expandDefinitions(Term t, const Definitions& defs);
/// Unfolds all definitions in the problem and drops the definition formulas.
Problem expandDefinitions(const Problem& p);

/// Unit laws for $true/$false, double negation and trivial equations.
Term simplifyFormula(Term t);
Term miniscope(Term f);
/// Leibniz and Andrews equalities at formula level, then the clause-level
/// Leibniz pattern [P s]^ff | [P t]^tt with P local to those literals.
Term replaceDefinedEqualities(Term t);
Clause replaceDefinedEqualities(const Clause& c);

/// Fresh sk<N> of type (captured types) > existentialType, applied to the
/// captured variables (eta-long).
Term skolemTerm(Type existentialType, const std::vector<Term>& capturedFreeVars);

/// Number of clauses the literal expands to (saturating).
size_t clauseEstimate(const Literal& l);

/// Exhaustive clausification (LiftEq, CNFNeg/Disj/Conj/All/Exists, implication
/// and equivalence expansion, eager Boolean extensionality on connective-headed
/// Boolean equations, eager ground NFE, threshold naming).
std::vector<Clause> normalize(const Clause& c, const PreprocessConfig& cfg = {});

/// A literal or clause that normalize would leave unchanged.
bool isNormalLiteral(const Literal& l);
bool isNormalClause(const Clause& c);

}  // namespace ep

#endif  // EP_CNF_HPP
