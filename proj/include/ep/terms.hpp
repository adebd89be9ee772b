// Simple types, interned spine-notation lambda terms, and the signature.
//
// Terms are locally nameless: bound variables are de Bruijn indices, free
// variables carry a global id. Every type and term is hash-consed inside the
// active Context, so structural (and hence alpha-) equality is pointer
// equality.

#ifndef EP_TERMS_HPP
#define EP_TERMS_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ep {

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Types

struct TypeNode;
using Type = const TypeNode*;

struct TypeNode {
  enum class Kind : uint8_t { Base, Fun };
  Kind kind;
  std::string name;  // Base only
  Type arg = nullptr;
  Type res = nullptr;
  uint32_t id = 0;

  bool isBase() const { return kind == Kind::Base; }
  bool isFun() const { return kind == Kind::Fun; }
};

Type baseType(const std::string& name);
Type funType(Type arg, Type res);
/// Curried function type args[0] -> args[1] -> ... -> res.
Type funType(std::span<const Type> args, Type res);
Type typeI();
Type typeO();

std::vector<Type> argTypes(Type t);
Type resultType(Type t);  // final base type
size_t arity(Type t);
/// Drop the first n argument types.
Type dropArgs(Type t, size_t n);
std::string showType(Type t);

// ---------------------------------------------------------------------------
// Signature

using SymbolId = uint32_t;
using VarId = uint32_t;

enum class Logical : uint8_t {
  None,
  True,
  False,
  Not,
  Or,
  And,
  Implies,
  Equiv,
  Eq,      // =^tau, per type
  Forall,  // Pi^tau, per type
  Exists,  // Sigma^tau, per type
  Box,     // modal input only
  Dia,
};

enum class SymbolKind : uint8_t { Logical, User, Skolem, Defined, Generated };

struct Symbol {
  std::string name;
  Type type;
  SymbolKind kind;
  Logical op = Logical::None;
  Type param = nullptr;  // instance type of =, Pi, Sigma
};

// ---------------------------------------------------------------------------
// Terms

enum class TermKind : uint8_t { Const, Free, Bound, Abs, App };

struct TermNode;

/// Handle to an interned term. Comparison is by identity of the canonical
/// representative.
class Term {
 public:
  Term() = default;
  explicit Term(const TermNode* n) : n_(n) {}

  const TermNode* node() const { return n_; }
  explicit operator bool() const { return n_ != nullptr; }
  bool operator==(const Term& o) const { return n_ == o.n_; }
  bool operator!=(const Term& o) const { return n_ != o.n_; }

  TermKind kind() const;
  Type type() const;
  uint32_t id() const;

  bool isConst() const { return kind() == TermKind::Const; }
  bool isFree() const { return kind() == TermKind::Free; }
  bool isBound() const { return kind() == TermKind::Bound; }
  bool isAbs() const { return kind() == TermKind::Abs; }
  bool isApp() const { return kind() == TermKind::App; }
  bool isAtom() const { return !isAbs() && !isApp(); }

  SymbolId symbol() const;  // Const
  VarId var() const;        // Free
  uint32_t index() const;   // Bound
  Type binderType() const;  // Abs
  Term body() const;        // Abs
  /// Head of an application, or the term itself for atoms.
  Term head() const;
  std::span<const Term> args() const;  // empty for non-App

  uint32_t looseBound() const;  // 1 + highest loose index, 0 if closed
  bool closed() const { return looseBound() == 0; }
  bool hasFreeVars() const;
  uint32_t size() const;
  bool betaNormal() const;
  bool etaLong() const;

  /// Head is a free variable (after stripping abstractions).
  bool isFlex() const;
  bool isRigid() const { return !isFlex(); }
  /// Logical operator at the head, or None.
  Logical logicalHead() const;

 private:
  const TermNode* n_ = nullptr;
};

struct TermNode {
  TermKind kind;
  Type type;
  uint32_t payload;  // symbol id / var id / de Bruijn index
  Type binderType = nullptr;
  Term body;
  Term head;
  std::vector<Term> args;
  uint32_t id = 0;
  size_t hash = 0;
  uint32_t looseBound = 0;
  uint32_t size = 1;
  bool hasFree = false;
  bool betaNormal = true;
  bool etaLong = true;
};

struct TermHash {
  size_t operator()(const Term& t) const { return std::hash<const void*>()(t.node()); }
};
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return a.id() < b.id(); }
};

// ---------------------------------------------------------------------------
// Context: the per-prover interning tables and signature.

class Context {
 public:
  Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  // types
  Type base(const std::string& name);
  Type fun(Type arg, Type res);
  bool isBaseTypeDeclared(const std::string& name) const;
  void declareBaseType(const std::string& name);

  // symbols
  SymbolId declare(const std::string& name, Type type, SymbolKind kind = SymbolKind::User);
  std::optional<SymbolId> lookup(const std::string& name) const;
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  size_t symbolCount() const { return symbols_.size(); }
  SymbolId logical(Logical op);
  SymbolId logical(Logical op, Type param);
  /// Fresh constant named <prefix><n>, never colliding with a declared name.
  SymbolId freshSymbol(const std::string& prefix, Type type, SymbolKind kind);
  void setKind(SymbolId id, SymbolKind kind) { symbols_.at(id).kind = kind; }

  // variables
  VarId freshVarId() { return nextVar_++; }
  const std::vector<Type>& baseTypes() const { return baseOrder_; }

  // raw interning (no normalization)
  Term intern(TermNode&& node);
  size_t termCount() const { return nodes_.size(); }

 private:
  struct KeyHash {
    size_t operator()(const TermNode* n) const { return n->hash; }
  };
  struct KeyEq {
    bool operator()(const TermNode* a, const TermNode* b) const;
  };
  std::deque<TypeNode> types_;
  std::unordered_map<std::string, Type> baseTypes_;
  std::vector<Type> baseOrder_;
  std::map<std::pair<uint32_t, uint32_t>, Type> funTypes_;

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> byName_;
  std::map<std::pair<Logical, uint32_t>, SymbolId> logicals_;
  std::unordered_map<std::string, uint32_t> freshCounters_;

  std::deque<TermNode> nodes_;
  std::unordered_set<const TermNode*, KeyHash, KeyEq> table_;
  VarId nextVar_ = 1;
};

/// The active context of the calling thread.
Context& ctx();

/// Installs a fresh Context for the lifetime of the scope.
class ContextScope {
 public:
  ContextScope();
  ~ContextScope();
  ContextScope(const ContextScope&) = delete;
  ContextScope& operator=(const ContextScope&) = delete;
  Context& context() { return *owned_; }

 private:
  std::unique_ptr<Context> owned_;
  Context* previous_;
};

// ---------------------------------------------------------------------------
// Construction. All constructors type-check and throw TypeError.

Term mkConst(SymbolId s);
Term mkFree(VarId v, Type t);
Term mkFreshVar(Type t);
Term mkBound(uint32_t index, Type t);
Term mkAbs(Type param, Term body);
/// Application in spine form; nested applications are flattened.
Term mkApp(Term head, std::span<const Term> args);
Term mkApp(Term head, std::initializer_list<Term> args);

Term mkTrue();
Term mkFalse();
Term mkNot(Term a);
Term mkOr(Term a, Term b);
Term mkAnd(Term a, Term b);
Term mkImplies(Term a, Term b);
Term mkEquiv(Term a, Term b);
Term mkEq(Term a, Term b);
/// Pi^t (lambda. body) where body refers to the bound variable as index 0.
Term mkForall(Type t, Term body);
Term mkExists(Type t, Term body);

// ---------------------------------------------------------------------------
// Operations

/// Shift loose de Bruijn indices >= cutoff by delta.
Term shift(Term t, int delta, uint32_t cutoff = 0);
/// Replace loose index 0 by `arg` inside `body` (body of an abstraction).
Term instantiate(Term body, Term arg);
Term betaNormalize(Term t);
/// Expects a beta-normal term.
Term etaLong(Term t);
/// beta-normal eta-long form; the canonical stored form.
Term normalize(Term t);
/// Wrap t in abstractions over the given parameter types (outermost first).
Term abstractOver(std::span<const Type> params, Term body);

class Substitution {
 public:
  Substitution() = default;
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  void bind(VarId v, Term t);
  std::optional<Term> lookup(VarId v) const;
  const std::map<VarId, Term>& bindings() const { return map_; }
  /// Composition: (this after other), i.e. x -> this(other(x)).
  Substitution after(const Substitution& other) const;

 private:
  std::map<VarId, Term> map_;
};

/// Capture-free substitution of free variables, followed by normalization.
Term substitute(Term t, const Substitution& s);
/// Substitution without the trailing normalization (for building redexes).
Term substituteRaw(Term t, const Substitution& s);

struct PositionStep {
  enum class Kind : uint8_t { Arg, Body, Head };
  Kind kind;
  uint32_t index = 0;
  bool operator==(const PositionStep&) const = default;
};
using Position = std::vector<PositionStep>;

Term subtermAt(Term t, const Position& p);
Term replaceAt(Term t, const Position& p, Term r);
/// Positions of subterms without loose bound variables, excluding heads.
std::vector<Position> closedPositions(Term t);

std::vector<Term> freeVars(Term t);  // ordered by first occurrence
void collectFreeVars(Term t, std::vector<Term>& out, std::unordered_set<VarId>& seen);
bool occursFree(VarId v, Term t);
bool containsSymbol(Term t, SymbolId s);
std::vector<SymbolId> symbolsOf(Term t);
/// Eta-long term for a bare variable/constant of function type.
Term etaExpandAtom(Term atom);
/// If t is (the eta-expansion of) a loose bound variable, its index.
std::optional<uint32_t> boundVarOf(Term t);
/// For a Miller pattern argument list (distinct bound variables, given as
/// indices relative to the context of `t`), build the closed term
/// lambda z1..zn. t[bvars[i] := zi]. Fails if t has other loose indices.
std::optional<Term> abstractPattern(Term t, const std::vector<uint32_t>& bvars,
                                    const std::vector<Type>& types);
std::string showTerm(Term t);  // debugging

}  // namespace ep

#endif  // EP_TERMS_HPP
