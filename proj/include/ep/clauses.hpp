// Literals as signed equations, clauses as literal multisets.

#ifndef EP_CLAUSES_HPP
#define EP_CLAUSES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ep/terms.hpp"

namespace ep {

enum class Polarity : uint8_t { Positive, Negative };

inline Polarity complement(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

struct Literal {
  Term lhs;
  Term rhs;
  Polarity polarity = Polarity::Positive;

  /// Oriented constructor: $true always ends up on the right, otherwise the
  /// side with the larger interned id goes left.
  static Literal make(Term l, Term r, Polarity p);
  /// The formula literal [s = $true]^p.
  static Literal formula(Term s, Polarity p);

  bool positive() const { return polarity == Polarity::Positive; }
  bool negative() const { return polarity == Polarity::Negative; }
  /// [s = $true]^p form.
  bool isFormula() const;
  Type type() const { return lhs.type(); }
  uint32_t weight() const { return lhs.size() + rhs.size(); }

  bool operator==(const Literal& o) const {
    return polarity == o.polarity && lhs == o.lhs && rhs == o.rhs;
  }
};

struct Clause {
  std::vector<Literal> literals;
  uint64_t id = 0;
  uint32_t age = 0;
  /// Primitive substitutions applied along this clause's lineage.
  uint32_t psDepth = 0;

  Clause() = default;
  explicit Clause(std::vector<Literal> lits) : literals(std::move(lits)) {}

  size_t size() const { return literals.size(); }
  bool empty() const { return literals.empty(); }
};

bool isUnificationConstraint(const Literal& l);
bool isFlexFlex(const Literal& l);
bool isEmptyClause(const Clause& c);
uint32_t clauseWeight(const Clause& c);

std::vector<Term> freeVars(const Clause& c);
bool isGround(const Clause& c);
Clause applySubstitution(const Clause& c, const Substitution& s);
/// Fresh variable renaming of a clause.
Clause freshVariant(const Clause& c);

/// One-sided matching: extends `s` so that pattern instantiated by s equals
/// target. Restricted to first-order and Miller-pattern occurrences of
/// variables; everything else fails conservatively.
bool matchTerm(Term pattern, Term target, Substitution& s);
bool matchLiteral(const Literal& pattern, const Literal& target, Substitution& s);

/// True iff some substitution maps C onto a sub-multiset of D.
bool subsumes(const Clause& c, const Clause& d);
/// Equal up to a bijective renaming of free variables.
bool isRenaming(const Clause& c, const Clause& d);
/// Renaming, or mutual subsumption with equal size.
bool isVariant(const Clause& c, const Clause& d);

}  // namespace ep

#endif  // EP_CLAUSES_HPP
