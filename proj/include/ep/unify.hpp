// General (partial) bindings, Huet-style pre-unification, and Miller pattern
// unification.

#ifndef EP_UNIFY_HPP
#define EP_UNIFY_HPP

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "ep/clauses.hpp"
#include "ep/terms.hpp"

namespace ep {

/// A partial binding lambda X1..Xn. k (H1 X1..Xn) .. (Hm X1..Xn).
struct GeneralBinding {
  Type goalType;
  bool imitation;
  /// Imitated constant, or the index (0-based, outermost first) of the
  /// projected parameter.
  uint32_t head;
  Term binding;
};

/// Imitation of `headConstant` (if given and type-compatible) followed by
/// every type-compatible projection.
std::vector<GeneralBinding> generalBindings(Type goal, std::optional<SymbolId> headConstant);
/// Imitation only.
std::optional<GeneralBinding> imitationBinding(Type goal, SymbolId headConstant);

using Constraint = std::pair<Term, Term>;

struct UnifResult {
  Substitution substitution;
  /// Remaining flex-flex constraints (negative literals).
  std::vector<Literal> residual;
};

struct UnifConfig {
  uint32_t depthBudget = 8;
  /// Cap on explored search states per problem.
  uint32_t maxStates = 20000;
  /// Apply the FlexFlex rule instead of retaining flex-flex pairs.
  bool flexFlexRule = false;
};

/// Lazily enumerates pre-unifiers breadth-first. Ordering is deterministic:
/// leftmost flex-rigid constraint first, imitation before projections.
class PreUnifier {
 public:
  PreUnifier(std::vector<Constraint> constraints, UnifConfig config = {});

  std::optional<UnifResult> next();
  /// Some branch was cut by the depth budget or the state cap.
  bool boundReached() const { return boundReached_; }
  /// No unifier exists (search space exhausted without hitting a bound).
  bool definitelyFailed() const { return exhausted_ && !boundReached_ && emitted_ == 0; }

 private:
  struct Eq {
    std::vector<Type> binders;
    Term lhs;
    Term rhs;
  };
  struct State {
    Substitution subst;
    std::vector<Eq> eqs;
    uint32_t depth = 0;
  };

  /// Triv/Bind/Decomp to fixpoint. Returns false on clash.
  bool simplify(State& st) const;
  void expand(const State& st, size_t eqIndex);
  void expandFlexFlex(const State& st);
  bool verify(const UnifResult& r) const;

  std::vector<Constraint> original_;
  UnifConfig config_;
  std::deque<State> queue_;
  uint32_t statesSeen_ = 0;
  uint32_t emitted_ = 0;
  bool boundReached_ = false;
  bool exhausted_ = false;
};

/// Collects up to `maxResults` pre-unifiers.
std::vector<UnifResult> preUnify(const std::vector<Constraint>& constraints, uint32_t depthBudget,
                                 size_t maxResults, bool* boundReached = nullptr);

enum class PatternOutcome { Unified, Failed, NotPattern };

struct PatternResult {
  PatternOutcome outcome;
  Substitution substitution;
};

/// Most general unifier on the higher-order pattern fragment.
PatternResult patternUnify(const std::vector<Constraint>& constraints);

/// Every flexible subterm is a Miller pattern.
bool isPatternTerm(Term t);

/// Constraint pairs of a clause's negative literals.
std::vector<Constraint> constraintsOf(const std::vector<Literal>& lits);

}  // namespace ep

#endif  // EP_UNIFY_HPP
