#include "ep/cnf.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <unordered_map>

namespace ep {

namespace {

Logical headOp(Term t) { return t.logicalHead(); }

bool isOp(Term t, Logical op, size_t nargs) {
  return t.isApp() && t.head().isConst() && headOp(t) == op && t.args().size() == nargs;
}

bool isQuantifier(Term t) {
  return (isOp(t, Logical::Forall, 1) || isOp(t, Logical::Exists, 1)) && t.args()[0].isAbs();
}

bool occursBound(Term t, uint32_t i) {
  if (t.looseBound() <= i) return false;
  switch (t.kind()) {
    case TermKind::Bound: return t.index() == i;
    case TermKind::Abs: return occursBound(t.body(), i + 1);
    case TermKind::App:
      if (occursBound(t.head(), i)) return true;
      for (const Term& a : t.args())
        if (occursBound(a, i)) return true;
      return false;
    default: return false;
  }
}

Term rebuildArgs(Term t, const std::function<Term(Term)>& f) {
  if (!t.isApp()) return t;
  std::vector<Term> args;
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(f(a));
    changed |= args.back() != a;
  }
  return changed ? mkApp(t.head(), args) : t;
}

Term mapTerm(Term t, const std::function<Term(Term)>& f) {
  if (t.isAbs()) return mkAbs(t.binderType(), f(t.body()));
  return rebuildArgs(t, f);
}

}  // namespace

// ---------------------------------------------------------------------------
// Definitions

bool isDefinitionFormula(Term f) {
  if (!(isOp(f, Logical::Eq, 2) || isOp(f, Logical::Equiv, 2))) return false;
  Term c = f.args()[0];
  if (!c.isConst() || ctx().symbol(c.symbol()).kind == SymbolKind::Logical) return false;
  Term body = f.args()[1];
  return body.closed() && !body.hasFreeVars() && !containsSymbol(body, c.symbol());
}

Definitions collectDefinitions(const Problem& p) {
  Definitions defs;
  for (const auto& f : p.formulas) {
    if (f.role != Role::Definition || !isDefinitionFormula(f.formula)) continue;
    SymbolId c = f.formula.args()[0].symbol();
    if (defs.count(c)) throw DefinitionError("constant '" + ctx().symbol(c).name + "' defined twice");
    defs[c] = f.formula.args()[1];
  }
  std::map<SymbolId, int> state;
  std::function<void(SymbolId)> visit = [&](SymbolId s) {
    int& st = state[s];
    if (st == 2) return;
    if (st == 1) throw DefinitionError("cyclic definition involving '" + ctx().symbol(s).name + "'");
    st = 1;
    for (SymbolId d : symbolsOf(defs.at(s)))
      if (defs.count(d)) visit(d);
    state[s] = 2;
  };
  for (const auto& [s, _] : defs) visit(s);
  for (const auto& [s, _] : defs) ctx().setKind(s, SymbolKind::Defined);
  return defs;
}

Term expandDefinitions(Term t, const Definitions& defs) {
  if (defs.empty()) return normalize(t);
  std::function<Term(Term)> unfold = [&](Term u) -> Term {
    if (u.isConst()) {
      auto it = defs.find(u.symbol());
      return it == defs.end() ? u : unfold(it->second);
    }
    if (u.isAbs()) return mkAbs(u.binderType(), unfold(u.body()));
    if (u.isApp()) {
      std::vector<Term> args;
      for (const Term& a : u.args()) args.push_back(unfold(a));
      return mkApp(unfold(u.head()), args);
    }
    return u;
  };
  return normalize(unfold(t));
}

Problem expandDefinitions(const Problem& p) {
  Definitions defs = collectDefinitions(p);
  Problem out;
  out.name = p.name;
  out.logicSpec = p.logicSpec;
  for (const auto& f : p.formulas) {
    if (f.role == Role::Definition && f.formula && isDefinitionFormula(f.formula) &&
        defs.count(f.formula.args()[0].symbol()))
      continue;
    AnnotatedFormula g = f;
    if (g.formula) g.formula = expandDefinitions(g.formula, defs);
    out.formulas.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simplification and miniscoping

Term simplifyFormula(Term t) {
  t = mapTerm(t, simplifyFormula);
  const Term top = mkTrue(), bot = mkFalse();
  if (isOp(t, Logical::Not, 1)) {
    Term a = t.args()[0];
    if (a == top) return bot;
    if (a == bot) return top;
    if (isOp(a, Logical::Not, 1)) return a.args()[0];
    return t;
  }
  if (!t.isApp() || t.args().size() != 2 || !t.head().isConst()) {
    if (isQuantifier(t)) {
      Term body = t.args()[0].body();
      if (body == top || body == bot) return body;
    }
    return t;
  }
  Term a = t.args()[0], b = t.args()[1];
  switch (headOp(t)) {
    case Logical::Or:
      if (a == top || b == top) return top;
      if (a == bot) return b;
      if (b == bot) return a;
      if (a == b) return a;
      return t;
    case Logical::And:
      if (a == bot || b == bot) return bot;
      if (a == top) return b;
      if (b == top) return a;
      if (a == b) return a;
      return t;
    case Logical::Implies:
      if (a == bot || b == top) return top;
      if (a == top) return b;
      if (b == bot) return simplifyFormula(mkNot(a));
      if (a == b) return top;
      return t;
    case Logical::Equiv:
      if (a == b) return top;
      if (a == top) return b;
      if (b == top) return a;
      if (a == bot) return simplifyFormula(mkNot(b));
      if (b == bot) return simplifyFormula(mkNot(a));
      return t;
    case Logical::Eq:
      if (a == b) return top;
      return t;
    default:
      return t;
  }
}

namespace {

Term dropBinder(Term t) { return shift(t, -1, 0); }

Term quantify(Logical q, Type ty, Term body) { return q == Logical::Forall ? mkForall(ty, body) : mkExists(ty, body); }

Term push(Logical q, Type ty, Term b) {
  if (!occursBound(b, 0)) return dropBinder(b);
  if (!b.isApp() || b.args().size() != 2 || !b.head().isConst()) return quantify(q, ty, b);
  Logical op = headOp(b);
  Term p = b.args()[0], r = b.args()[1];
  Logical dist = q == Logical::Forall ? Logical::And : Logical::Or;
  Logical pull = q == Logical::Forall ? Logical::Or : Logical::And;
  auto mk = [](Logical o, Term x, Term y) {
    if (o == Logical::And) return mkAnd(x, y);
    if (o == Logical::Or) return mkOr(x, y);
    return mkImplies(x, y);
  };
  if (op == dist) return mk(op, push(q, ty, p), push(q, ty, r));
  if (op == pull) {
    if (!occursBound(p, 0)) return mk(op, dropBinder(p), push(q, ty, r));
    if (!occursBound(r, 0)) return mk(op, push(q, ty, p), dropBinder(r));
  }
  if (op == Logical::Implies && !occursBound(p, 0)) return mkImplies(dropBinder(p), push(q, ty, r));
  return quantify(q, ty, b);
}

}  // namespace

Term miniscope(Term f) {
  if (isQuantifier(f)) {
    Term abs = f.args()[0];
    return push(headOp(f), abs.binderType(), miniscope(abs.body()));
  }
  if (f.type() == typeO() && f.isApp() && f.head().isConst()) {
    Logical op = headOp(f);
    if (op == Logical::Not || op == Logical::Or || op == Logical::And || op == Logical::Implies ||
        op == Logical::Equiv)
      return rebuildArgs(f, miniscope);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Defined equalities

namespace {

// body of a quantifier over P: index 0 is P. Returns (s, t) with P-free
// arguments if body is  ~ (P s) | P t  or  P s => P t.
std::optional<std::pair<Term, Term>> leibnizBody(Term body) {
  Term l, r;
  if (isOp(body, Logical::Implies, 2)) {
    l = body.args()[0];
    r = body.args()[1];
  } else if (isOp(body, Logical::Or, 2) && isOp(body.args()[0], Logical::Not, 1)) {
    l = body.args()[0].args()[0];
    r = body.args()[1];
  } else {
    return std::nullopt;
  }
  auto arg = [](Term a) -> std::optional<Term> {
    if (!a.isApp() || !a.head().isBound() || a.head().index() != 0 || a.args().size() != 1) return std::nullopt;
    if (occursBound(a.args()[0], 0)) return std::nullopt;
    return dropBinder(a.args()[0]);
  };
  auto s = arg(l), t = arg(r);
  if (!s || !t) return std::nullopt;
  return std::make_pair(*s, *t);
}

// (! [X] : Q X X) => Q s t  with index 0 = Q.
std::optional<std::pair<Term, Term>> andrewsBody(Term body) {
  if (!isOp(body, Logical::Implies, 2)) return std::nullopt;
  Term refl = body.args()[0], app = body.args()[1];
  if (!isOp(refl, Logical::Forall, 1) || !refl.args()[0].isAbs()) return std::nullopt;
  Term rb = refl.args()[0].body();
  if (!rb.isApp() || !rb.head().isBound() || rb.head().index() != 1 || rb.args().size() != 2) return std::nullopt;
  if (rb.args()[0] != rb.args()[1] || !boundVarOf(rb.args()[0]) || *boundVarOf(rb.args()[0]) != 0)
    return std::nullopt;
  if (!app.isApp() || !app.head().isBound() || app.head().index() != 0 || app.args().size() != 2)
    return std::nullopt;
  Term s = app.args()[0], t = app.args()[1];
  if (occursBound(s, 0) || occursBound(t, 0)) return std::nullopt;
  return std::make_pair(dropBinder(s), dropBinder(t));
}

}  // namespace

Term replaceDefinedEqualities(Term t) {
  t = mapTerm(t, static_cast<Term (*)(Term)>(replaceDefinedEqualities));
  if (!isOp(t, Logical::Forall, 1) || !t.args()[0].isAbs()) return t;
  Term body = t.args()[0].body();
  if (auto st = leibnizBody(body)) return mkEq(st->first, st->second);
  if (auto st = andrewsBody(body)) return mkEq(st->first, st->second);
  return t;
}

Clause replaceDefinedEqualities(const Clause& c) {
  std::vector<Literal> lits;
  for (const Literal& l : c.literals) {
    Term a = normalize(replaceDefinedEqualities(l.lhs)), b = normalize(replaceDefinedEqualities(l.rhs));
    if (b == mkTrue() && isOp(a, Logical::Eq, 2) && a != l.lhs)
      lits.push_back(Literal::make(a.args()[0], a.args()[1], l.polarity));
    else
      lits.push_back(Literal::make(a, b, l.polarity));
  }
  // Clause level: [P s]^ff | [P t]^tt with P occurring nowhere else.
  for (size_t i = 0; i < lits.size(); ++i) {
    const Literal& a = lits[i];
    if (!a.isFormula() || !a.negative() || !a.lhs.isApp() || !a.lhs.head().isFree() || a.lhs.args().size() != 1)
      continue;
    Term p = a.lhs.head();
    for (size_t j = 0; j < lits.size(); ++j) {
      const Literal& b = lits[j];
      if (j == i || !b.isFormula() || !b.positive() || !b.lhs.isApp() || b.lhs.head() != p || b.lhs.args().size() != 1)
        continue;
      Term s = a.lhs.args()[0], t = b.lhs.args()[0];
      if (occursFree(p.var(), s) || occursFree(p.var(), t)) continue;
      bool elsewhere = false;
      for (size_t k = 0; k < lits.size() && !elsewhere; ++k)
        if (k != i && k != j) elsewhere = occursFree(p.var(), lits[k].lhs) || occursFree(p.var(), lits[k].rhs);
      if (elsewhere) continue;
      std::vector<Literal> out;
      for (size_t k = 0; k < lits.size(); ++k)
        if (k != i && k != j) out.push_back(lits[k]);
      out.push_back(Literal::make(s, t, Polarity::Positive));
      Clause r = c;
      r.literals = std::move(out);
      return replaceDefinedEqualities(r);
    }
  }
  Clause r = c;
  r.literals = std::move(lits);
  return r;
}

// ---------------------------------------------------------------------------
// Clausification

Term skolemTerm(Type existentialType, const std::vector<Term>& captured) {
  std::vector<Type> types;
  for (const Term& v : captured) types.push_back(v.type());
  Type ty = funType(types, existentialType);
  SymbolId sk = ctx().freshSymbol("sk", ty, SymbolKind::Skolem);
  if (captured.empty()) return etaExpandAtom(mkConst(sk));
  std::vector<Term> args;
  for (const Term& v : captured) args.push_back(etaExpandAtom(v));
  return normalize(mkApp(mkConst(sk), args));
}

namespace {

constexpr size_t kCap = 1u << 20;

size_t sat(size_t a) { return std::min(a, kCap); }
size_t mul(size_t a, size_t b) { return sat(a > 0 && b > kCap / a ? kCap : a * b); }

size_t estimate(Term s, bool pos);

size_t estimateEq(Term a, Term b, bool pos) {
  // s <=> t: (~s | t) & (s | ~t) positively, (s | t) & (~s | ~t) negatively.
  if (pos) return sat(mul(estimate(a, false), estimate(b, true)) + mul(estimate(a, true), estimate(b, false)));
  return sat(mul(estimate(a, true), estimate(b, true)) + mul(estimate(a, false), estimate(b, false)));
}

bool connectiveHeaded(Term t) {
  switch (t.logicalHead()) {
    case Logical::Not:
    case Logical::Or:
    case Logical::And:
    case Logical::Implies:
    case Logical::Equiv:
    case Logical::Forall:
    case Logical::Exists:
    case Logical::Eq:
      return t.isApp();
    default:
      return false;
  }
}

size_t estimate(Term s, bool pos) {
  if (!s.isApp() || !s.head().isConst()) return 1;
  auto args = s.args();
  switch (headOp(s)) {
    case Logical::Not:
      return args.size() == 1 ? estimate(args[0], !pos) : 1;
    case Logical::Or:
      if (args.size() != 2) return 1;
      return pos ? mul(estimate(args[0], true), estimate(args[1], true))
                 : sat(estimate(args[0], false) + estimate(args[1], false));
    case Logical::And:
      if (args.size() != 2) return 1;
      return pos ? sat(estimate(args[0], true) + estimate(args[1], true))
                 : mul(estimate(args[0], false), estimate(args[1], false));
    case Logical::Implies:
      if (args.size() != 2) return 1;
      return pos ? mul(estimate(args[0], false), estimate(args[1], true))
                 : sat(estimate(args[0], true) + estimate(args[1], false));
    case Logical::Equiv:
      return args.size() == 2 ? estimateEq(args[0], args[1], pos) : 1;
    case Logical::Eq:
      if (args.size() != 2 || args[0].type() != typeO()) return 1;
      if (!connectiveHeaded(args[0]) && !connectiveHeaded(args[1])) return 1;
      return estimateEq(args[0], args[1], pos);
    case Logical::Forall:
    case Logical::Exists:
      return args.size() == 1 && args[0].isAbs() ? estimate(args[0].body(), pos) : 1;
    default:
      return 1;
  }
}

bool isTrivialBoolEq(const Literal& l) {
  return l.type() == typeO() && !l.isFormula() && (connectiveHeaded(l.lhs) || connectiveHeaded(l.rhs));
}

}  // namespace

size_t clauseEstimate(const Literal& l) {
  if (l.isFormula()) return estimate(l.lhs, l.positive());
  if (isTrivialBoolEq(l)) return estimateEq(l.lhs, l.rhs, l.positive());
  return 1;
}

bool isNormalLiteral(const Literal& l) {
  const Term top = mkTrue(), bot = mkFalse();
  if (l.lhs == bot || l.rhs == bot || l.lhs == top) return false;
  if (l.isFormula()) return !connectiveHeaded(l.lhs);
  if (l.type() == typeO()) return !isTrivialBoolEq(l);
  if (l.negative() && l.type()->isFun() && !l.lhs.hasFreeVars() && !l.rhs.hasFreeVars()) return false;
  return true;
}

bool isNormalClause(const Clause& c) {
  return std::all_of(c.literals.begin(), c.literals.end(), isNormalLiteral);
}

namespace {

class Clausifier {
 public:
  Clausifier(const PreprocessConfig& cfg) : cfg_(cfg) {}

  std::vector<Clause> run(const Clause& c) {
    std::deque<std::vector<Literal>> work;
    work.push_back(c.literals);
    std::vector<Clause> out;
    while (!work.empty()) {
      std::vector<Literal> lits = std::move(work.front());
      work.pop_front();
      if (name(lits, work)) {
        work.push_front(std::move(lits));
        continue;
      }
      size_t i = 0;
      while (i < lits.size() && isNormalLiteral(lits[i])) ++i;
      if (i == lits.size()) {
        if (auto fin = finish(lits)) {
          Clause r = c;
          r.literals = std::move(*fin);
          out.push_back(std::move(r));
        }
        continue;
      }
      std::vector<std::vector<Literal>> repl = expand(lits, i);
      for (auto it = repl.rbegin(); it != repl.rend(); ++it) {
        if (!it->empty() && it->front().lhs == Term()) continue;  // tautology marker
        std::vector<Literal> next;
        for (size_t k = 0; k < lits.size(); ++k)
          if (k != i) next.push_back(lits[k]);
        next.insert(next.begin() + static_cast<long>(i), it->begin(), it->end());
        work.push_front(std::move(next));
      }
    }
    return out;
  }

 private:
  static Literal lit(Term s, bool pos) { return Literal::formula(normalize(s), pos ? Polarity::Positive : Polarity::Negative); }

  static std::vector<Term> clauseVars(const std::vector<Literal>& lits) {
    Clause tmp(lits);
    return freeVars(tmp);
  }

  // Replacement literal groups for the literal at i; each group becomes one
  // clause (together with the other literals).
  std::vector<std::vector<Literal>> expand(const std::vector<Literal>& lits, size_t i) {
    const Literal& l = lits[i];
    const Term top = mkTrue(), bot = mkFalse();
    const std::vector<std::vector<Literal>> tautology = {{Literal{Term(), Term(), Polarity::Positive}}};
    // Truth constants.
    if (l.isFormula() && l.lhs == top) return l.positive() ? tautology : std::vector<std::vector<Literal>>{{}};
    if (l.lhs == bot || l.rhs == bot) {
      Term other = l.lhs == bot ? l.rhs : l.lhs;
      if (other == top) return l.positive() ? std::vector<std::vector<Literal>>{{}} : tautology;
      if (other == bot) return l.positive() ? tautology : std::vector<std::vector<Literal>>{{}};
      return {{Literal::formula(other, complement(l.polarity))}};
    }
    if (!l.isFormula()) {
      if (l.type() == typeO()) {
        // Eager Boolean extensionality.
        Term a = l.lhs, b = l.rhs;
        if (l.positive()) return {{lit(a, false), lit(b, true)}, {lit(a, true), lit(b, false)}};
        return {{lit(a, true), lit(b, true)}, {lit(a, false), lit(b, false)}};
      }
      // Ground negative functional equation.
      Term sk = skolemTerm(l.type()->arg, clauseVars(lits));
      return {{Literal::make(normalize(mkApp(l.lhs, {sk})), normalize(mkApp(l.rhs, {sk})), Polarity::Negative)}};
    }
    Term s = l.lhs;
    bool pos = l.positive();
    auto args = s.args();
    switch (s.logicalHead()) {
      case Logical::Not:
        return {{lit(args[0], !pos)}};
      case Logical::Or:
        if (pos) return {{lit(args[0], true), lit(args[1], true)}};
        return {{lit(args[0], false)}, {lit(args[1], false)}};
      case Logical::And:
        if (pos) return {{lit(args[0], true)}, {lit(args[1], true)}};
        return {{lit(args[0], false), lit(args[1], false)}};
      case Logical::Implies:
        if (pos) return {{lit(args[0], false), lit(args[1], true)}};
        return {{lit(args[0], true)}, {lit(args[1], false)}};
      case Logical::Equiv:
        return {{Literal::make(args[0], args[1], l.polarity)}};
      case Logical::Eq:
        return {{Literal::make(args[0], args[1], l.polarity)}};
      case Logical::Forall:
      case Logical::Exists: {
        Term abs = args[0];
        bool universal = (s.logicalHead() == Logical::Forall) == pos;
        Term witness = universal ? etaExpandAtom(mkFreshVar(abs.binderType()))
                                 : skolemTerm(abs.binderType(), clauseVars(lits));
        return {{lit(instantiate(abs.body(), witness), pos)}};
      }
      default:
        throw std::logic_error("clausification: unexpected literal");
    }
  }

  // Renames the most expensive literal when the clause would blow up.
  bool name(std::vector<Literal>& lits, std::deque<std::vector<Literal>>& work) {
    if (lits.size() < 2) return false;
    size_t total = 1, big = 0, worst = 0, expensive = 0;
    for (size_t k = 0; k < lits.size(); ++k) {
      size_t e = clauseEstimate(lits[k]);
      total = mul(total, e);
      if (e > 1) ++expensive;
      if (e > big) {
        big = e;
        worst = k;
      }
    }
    if (total <= cfg_.namingThreshold || expensive < 2) return false;
    Literal l = lits[worst];
    Term f = l.isFormula() ? l.lhs : mkEq(l.lhs, l.rhs);
    std::vector<Term> vars = freeVars(f);
    std::vector<Type> types;
    for (const Term& v : vars) types.push_back(v.type());
    SymbolId d = ctx().freshSymbol("nm", funType(types, typeO()), SymbolKind::Generated);
    std::vector<Term> args;
    for (const Term& v : vars) args.push_back(etaExpandAtom(v));
    Term atom = args.empty() ? mkConst(d) : mkApp(mkConst(d), args);
    lits[worst] = Literal::formula(atom, l.polarity);
    work.push_back({Literal::formula(atom, complement(l.polarity)), l});
    return true;
  }

  static std::optional<std::vector<Literal>> finish(const std::vector<Literal>& lits) {
    std::vector<Literal> out;
    for (const Literal& l : lits) {
      if (l.positive() && l.lhs == l.rhs) return std::nullopt;
      if (l.negative() && l.lhs == l.rhs) continue;
      if (std::find(out.begin(), out.end(), l) != out.end()) continue;
      for (const Literal& m : out)
        if (m.lhs == l.lhs && m.rhs == l.rhs && m.polarity != l.polarity) return std::nullopt;
      out.push_back(l);
    }
    return out;
  }

  const PreprocessConfig& cfg_;
};

}  // namespace

std::vector<Clause> normalize(const Clause& c, const PreprocessConfig& cfg) {
  return Clausifier(cfg).run(c);
}

}  // namespace ep
