// TPTP THF0 input, SZS status lines and TSTP proof certificates.

#ifndef EP_TPTP_HPP
#define EP_TPTP_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ep/clauses.hpp"
#include "ep/terms.hpp"

namespace ep {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    if (line <= 0) return msg;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
  }
  int line_;
  int column_;
};

/// Syntactically valid TPTP outside the supported THF0 subset.
class UnsupportedInput : public ParseError {
 public:
  using ParseError::ParseError;
};

enum class Role {
  Type,
  Axiom,
  Hypothesis,
  Definition,
  Lemma,
  Theorem,
  Conjecture,
  NegatedConjecture,
  Logic,
  Plain,
};

std::string roleName(Role r);

enum class Consequence { Global, Local };

/// Semantics parameters of a `logic`-role modal specification.
struct LogicSpec {
  std::string constants = "rigid";
  std::string quantification = "constant";
  Consequence consequence = Consequence::Global;
  /// System name (K, D, T, B, S4, S5) or empty when axiom schemes are listed.
  std::string system;
  std::vector<std::string> axiomSchemes;
};

struct AnnotatedFormula {
  std::string name;
  Role role = Role::Axiom;
  Term formula;  // null for type declarations
  /// Type declarations: the declared symbol name and its type (nullptr for
  /// `$tType` declarations of base types).
  std::string declaredName;
  Type declaredType = nullptr;
  std::string sourceFile;
};

struct Problem {
  std::string name;
  std::vector<AnnotatedFormula> formulas;
  std::optional<LogicSpec> logicSpec;

  size_t conjectureCount() const;
  bool usesModalOperators() const;
};

struct ParseOptions {
  std::string problemName = "problem";
  /// Root for include directives.
  std::string includeDir;
};

Problem parseProblem(std::string_view text, const ParseOptions& opts = {});
Problem parseProblemFile(const std::string& path, const std::string& includeDir = {});
/// Parse a single closed THF formula against the current signature.
Term parseFormula(std::string_view text);
Type parseType(std::string_view text);

// ---------------------------------------------------------------------------
// Printing

/// Names for free variables (and, implicitly, bound variables) of one
/// formula or clause.
class VarNamer {
 public:
  VarNamer() = default;
  explicit VarNamer(const std::vector<Term>& freeVars);
  const std::string& nameOf(VarId v);
  size_t count() const { return names_.size(); }
  static std::string letter(size_t i);

 private:
  std::unordered_map<VarId, std::string> names_;
};

std::string printType(Type t);
/// TPTP rendering of a closed or open term; free variables named by `namer`.
std::string printTerm(Term t, VarNamer& namer);
std::string printTerm(Term t);
/// The clause as a universally closed THF formula.
std::string printClause(const Clause& c);
std::string printClause(const Clause& c, VarNamer& namer);
std::string printAnnotated(const AnnotatedFormula& f);
std::string printProblem(const Problem& p);

enum class SzsStatus {
  Theorem,
  ContradictoryAxioms,
  CounterSatisfiable,
  GaveUp,
  Timeout,
  Unsatisfiable,
  Satisfiable,
  Error,
};

std::string szsName(SzsStatus s);
std::string printSzs(SzsStatus s, const std::string& problemName);

struct InferenceRecord {
  std::string rule;
  std::string status;  // thm, esa, cth
  std::vector<std::string> parents;
  /// (variable name, printed term) pairs, attached to the first parent.
  std::vector<std::pair<std::string, std::string>> bindings;
};

struct ProofLine {
  std::string name;
  std::string role;
  std::string formula;  // printed formula text
  std::optional<InferenceRecord> inference;
  /// For input formulas: file('<sourceFile>',<sourceName>).
  std::string sourceFile;
  std::string sourceName;
  bool isFalse = false;
};

/// The closed set of rule names that may appear in certificates.
const std::vector<std::string>& proofRuleVocabulary();

/// Renders a TSTP refutation between SZS output markers. Throws
/// std::invalid_argument on dangling parents, cycles or a missing `$false`.
std::string printProof(const std::vector<std::string>& typeLines, const std::vector<ProofLine>& lines,
                       const std::string& problemName);

/// Whitespace-insensitive TPTP token stream (for golden comparisons).
std::vector<std::string> tokenize(std::string_view text);

}  // namespace ep

#endif  // EP_TPTP_HPP
