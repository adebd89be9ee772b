#include "ep/calculus.hpp"

#include <algorithm>
#include <unordered_set>

namespace ep {

namespace {

Term sideOf(const Literal& l, bool right) { return right ? l.rhs : l.lhs; }

std::optional<VarId> varOf(Term t) {
  Term b = t;
  while (b.isAbs()) b = b.body();
  Term h = b.head();
  if (!h.isFree() || etaExpandAtom(h) != t) return std::nullopt;
  return h.var();
}

Term stripAbs(Term t) {
  while (t.isAbs()) t = t.body();
  return t;
}

// Both heads rigid and different: no unifier can exist.
bool rigidClash(Term a, Term b) {
  Term x = stripAbs(a).head(), y = stripAbs(b).head();
  if (x.isFree() || y.isFree()) return false;
  return x != y;
}

bool isTruthValue(Term t) { return t == mkTrue() || t == mkFalse(); }

Clause withLiterals(const Clause& base, std::vector<Literal> lits) {
  Clause out(std::move(lits));
  out.psDepth = base.psDepth;
  return out;
}

std::vector<Literal> othersThan(const Clause& c, std::initializer_list<uint32_t> skip) {
  std::vector<Literal> out;
  for (uint32_t k = 0; k < c.size(); ++k)
    if (std::find(skip.begin(), skip.end(), k) == skip.end()) out.push_back(c.literals[k]);
  return out;
}

void checkIndex(const Clause& c, uint32_t i) {
  if (i >= c.size()) throw RuleError("literal index out of range");
}

RuleApplication record(const std::string& rule, const Clause& c, Clause produced) {
  RuleApplication app;
  app.rule = rule;
  app.premises = {c.id};
  app.produced = std::move(produced);
  return app;
}

Substitution restrictTo(const Substitution& s, const Clause& c) {
  Substitution out;
  for (const Term& v : freeVars(c))
    if (auto b = s.lookup(v.var())) out.bind(v.var(), *b);
  return out;
}

bool sameMultiset(std::vector<Literal> a, std::vector<Literal> b) {
  auto key = [](const Literal& x, const Literal& y) {
    if (x.lhs != y.lhs) return x.lhs.id() < y.lhs.id();
    if (x.rhs != y.rhs) return x.rhs.id() < y.rhs.id();
    return x.polarity < y.polarity;
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  return a == b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Para

RuleApplication para(const Clause& c, LitSide site, const Position& pos, const Clause& d0, LitSide from) {
  checkIndex(c, site.literal);
  checkIndex(d0, from.literal);
  Clause d = freshVariant(d0);
  const Literal& dl = d.literals[from.literal];
  if (!dl.positive()) throw RuleError("para: equation literal is not positive");
  Term l = sideOf(dl, from.right), r = sideOf(dl, !from.right);
  const Literal& cl = c.literals[site.literal];
  Term s = sideOf(cl, site.right), t = sideOf(cl, !site.right);
  Term sub;
  try {
    sub = subtermAt(s, pos);
  } catch (const std::exception&) {
    throw RuleError("para: invalid position");
  }
  if (!sub) throw RuleError("para: invalid position");
  if (sub.type() != l.type()) throw RuleError("para: type mismatch");
  if (!sub.closed()) throw RuleError("para: subterm captures bound variables");
  Term rewritten = normalize(replaceAt(s, pos, r));
  std::vector<Literal> lits = {Literal::make(rewritten, t, cl.polarity)};
  for (const Literal& x : othersThan(c, {site.literal})) lits.push_back(x);
  for (const Literal& x : othersThan(d, {from.literal})) lits.push_back(x);
  lits.push_back(Literal::make(sub, l, Polarity::Negative));
  Clause out = withLiterals(c, std::move(lits));
  out.psDepth = std::max(c.psDepth, d0.psDepth);
  RuleApplication app = record("paramod_ordered", c, std::move(out));
  app.premises.push_back(d0.id);
  app.sites = {site, from};
  app.position = pos;
  app.constraints = 1;
  return app;
}

bool paraPermitted(const Clause& c, LitSide site, const Position& pos, const Clause& d, LitSide from) {
  const Literal& cl = c.literals[site.literal];
  const Literal& dl = d.literals[from.literal];
  if (cl.positive() && dl.positive() && cl.isFormula() && dl.isFormula()) return false;
  if (pos.empty() && varOf(sideOf(cl, site.right))) return false;
  return true;
}

std::vector<RuleApplication> paraInferences(const Clause& c, const Clause& d) {
  std::vector<RuleApplication> out;
  for (uint32_t j = 0; j < d.size(); ++j) {
    const Literal& dl = d.literals[j];
    if (!dl.positive()) continue;
    for (bool fromRight : {false, true}) {
      Term l = sideOf(dl, fromRight);
      if (isTruthValue(l) || varOf(l)) continue;
      for (uint32_t i = 0; i < c.size(); ++i) {
        for (bool right : {false, true}) {
          Term s = sideOf(c.literals[i], right);
          if (isTruthValue(s)) continue;
          for (const Position& pos : closedPositions(s)) {
            Term sub = subtermAt(s, pos);
            if (sub.type() != l.type() || isTruthValue(sub) || rigidClash(sub, l)) continue;
            LitSide site{i, right}, from{j, fromRight};
            if (!paraPermitted(c, site, pos, d, from)) continue;
            out.push_back(para(c, site, pos, d, from));
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// EqFac

RuleApplication eqfac(const Clause& c, uint32_t i, LitSide j) {
  checkIndex(c, i);
  checkIndex(c, j.literal);
  if (i == j.literal) throw RuleError("eqfac: identical literals");
  const Literal& li = c.literals[i];
  const Literal& lj = c.literals[j.literal];
  if (li.polarity != lj.polarity) throw RuleError("eqfac: polarity mismatch");
  if (li.type() != lj.type()) throw RuleError("eqfac: type mismatch");
  Term u = sideOf(lj, j.right), v = sideOf(lj, !j.right);
  std::vector<Literal> lits = othersThan(c, {i, j.literal});
  lits.push_back(li);
  lits.push_back(Literal::make(li.lhs, u, Polarity::Negative));
  lits.push_back(Literal::make(li.rhs, v, Polarity::Negative));
  RuleApplication app = record("eqfactor_ordered", c, withLiterals(c, std::move(lits)));
  app.sites = {LitSide{i, false}, j};
  app.constraints = 2;
  return app;
}

std::vector<RuleApplication> eqfacInferences(const Clause& c) {
  std::vector<RuleApplication> out;
  for (uint32_t i = 0; i < c.size(); ++i) {
    for (uint32_t j = 0; j < c.size(); ++j) {
      if (i == j) continue;
      const Literal& li = c.literals[i];
      const Literal& lj = c.literals[j];
      if (li.polarity != lj.polarity || li.type() != lj.type()) continue;
      for (bool swap : {false, true}) {
        if (swap && lj.isFormula()) continue;
        // The unswapped pair is symmetric in i and j.
        if (!swap && j < i) continue;
        Term u = sideOf(lj, swap), v = sideOf(lj, !swap);
        if (rigidClash(li.lhs, u) || rigidClash(li.rhs, v)) continue;
        out.push_back(eqfac(c, i, LitSide{j, swap}));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Primitive substitution

std::vector<RuleApplication> primSubst(const Clause& c, uint32_t i, const PrimSubstHeads& heads) {
  checkIndex(c, i);
  std::vector<RuleApplication> out;
  const Literal& l = c.literals[i];
  if (!l.isFormula()) return out;
  Term h = stripAbs(l.lhs).head();
  if (!h.isFree() || resultType(h.type()) != typeO()) return out;
  std::vector<SymbolId> symbols = {ctx().logical(Logical::Not), ctx().logical(Logical::Or)};
  for (Type t : heads.types) symbols.push_back(ctx().logical(Logical::Forall, t));
  for (Type t : heads.types) symbols.push_back(ctx().logical(Logical::Eq, t));
  for (SymbolId s : symbols) {
    auto gb = imitationBinding(h.type(), s);
    if (!gb) continue;
    Substitution sigma;
    sigma.bind(h.var(), gb->binding);
    Clause inst = applySubstitution(c, sigma);
    inst.psDepth = c.psDepth + 1;
    RuleApplication app = record("prim_subst", c, std::move(inst));
    app.sites = {LitSide{i, false}};
    app.bindings = sigma;
    out.push_back(std::move(app));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extensionality

std::vector<RuleApplication> boolExt(const Clause& c, uint32_t i) {
  checkIndex(c, i);
  const Literal& l = c.literals[i];
  if (l.type() != typeO() || l.isFormula()) throw RuleError("bool_ext: not a Boolean equation");
  Polarity second = l.positive() ? Polarity::Negative : Polarity::Positive;
  std::vector<RuleApplication> out;
  for (int k = 0; k < 2; ++k) {
    Polarity ps = k == 0 ? Polarity::Positive : Polarity::Negative;
    Polarity pt = k == 0 ? second : complement(second);
    std::vector<Literal> lits = othersThan(c, {i});
    lits.push_back(Literal::formula(l.lhs, ps));
    lits.push_back(Literal::formula(l.rhs, pt));
    RuleApplication app = record("bool_ext", c, withLiterals(c, std::move(lits)));
    app.sites = {LitSide{i, k == 1}};
    out.push_back(std::move(app));
  }
  return out;
}

RuleApplication funcExt(const Clause& c, uint32_t i, std::optional<Term> witness) {
  checkIndex(c, i);
  const Literal& l = c.literals[i];
  Type t = l.type();
  if (!t->isFun()) throw RuleError("func_ext: not a functional equation");
  std::vector<SymbolId> introduced;
  Term w;
  if (witness) {
    w = *witness;
    if (w.type() != t->arg) throw RuleError("func_ext: witness type mismatch");
  } else if (l.positive()) {
    w = etaExpandAtom(mkFreshVar(t->arg));
  } else {
    w = skolemTerm(t->arg, freeVars(c));
    introduced.push_back(stripAbs(w).head().symbol());
  }
  std::vector<Literal> lits = othersThan(c, {i});
  lits.push_back(Literal::make(normalize(mkApp(l.lhs, {w})), normalize(mkApp(l.rhs, {w})), l.polarity));
  RuleApplication app = record("func_ext", c, withLiterals(c, std::move(lits)));
  app.status = l.positive() ? "thm" : "esa";
  app.sites = {LitSide{i, false}};
  app.witness = w;
  app.introduced = std::move(introduced);
  return app;
}

// ---------------------------------------------------------------------------
// Injectivity

namespace {

struct InjShape {
  SymbolId f;
};

std::optional<InjShape> injShape(const Clause& c) {
  if (c.size() != 2) return std::nullopt;
  const Literal* neg = nullptr;
  const Literal* pos = nullptr;
  for (const Literal& l : c.literals) (l.negative() ? neg : pos) = &l;
  if (!neg || !pos) return std::nullopt;
  Term a = neg->lhs, b = neg->rhs;
  if (!a.isApp() || !b.isApp() || a.head() != b.head() || !a.head().isConst()) return std::nullopt;
  if (a.args().size() != 1 || b.args().size() != 1) return std::nullopt;
  const Symbol& f = ctx().symbol(a.head().symbol());
  if (f.kind == SymbolKind::Logical || argTypes(f.type).size() != 1) return std::nullopt;
  auto x = varOf(a.args()[0]), y = varOf(b.args()[0]);
  auto u = varOf(pos->lhs), v = varOf(pos->rhs);
  if (!x || !y || !u || !v || *x == *y) return std::nullopt;
  if (!((*u == *x && *v == *y) || (*u == *y && *v == *x))) return std::nullopt;
  return InjShape{a.head().symbol()};
}

RuleApplication injWith(const Clause& c, SymbolId f, SymbolId inv) {
  Type ft = ctx().symbol(f).type;
  Term z = etaExpandAtom(mkFreshVar(ft->arg));
  Term lhs = normalize(mkApp(mkConst(inv), {mkApp(mkConst(f), {z})}));
  RuleApplication app = record("inj", c, Clause({Literal::make(lhs, z, Polarity::Positive)}));
  app.introduced = {inv};
  return app;
}

}  // namespace

std::optional<RuleApplication> injRule(const Clause& c, std::set<SymbolId>& inverted) {
  auto shape = injShape(c);
  if (!shape || inverted.count(shape->f)) return std::nullopt;
  inverted.insert(shape->f);
  const Symbol& f = ctx().symbol(shape->f);
  SymbolId inv = ctx().freshSymbol(f.name + "_inv", funType(f.type->res, f.type->arg), SymbolKind::Skolem);
  return injWith(c, shape->f, inv);
}

// ---------------------------------------------------------------------------
// Exhaustive instantiation

std::vector<Term> finiteDomain(Type t) {
  Type o = typeO();
  if (t == o) return {mkTrue(), mkFalse()};
  if (t == funType(o, o)) {
    Term x = mkBound(0, o);
    return {mkAbs(o, mkTrue()), mkAbs(o, mkFalse()), mkAbs(o, x), mkAbs(o, mkNot(x))};
  }
  throw RuleError("instantiate: type " + showType(t) + " is not finite");
}

std::vector<RuleApplication> exhaustiveInstantiate(const Clause& c, VarId x, Type t) {
  std::vector<RuleApplication> out;
  for (Term v : finiteDomain(t)) {
    Substitution sigma;
    sigma.bind(x, normalize(v));
    RuleApplication app = record("instantiate", c, applySubstitution(c, sigma));
    app.bindings = sigma;
    out.push_back(std::move(app));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unification

std::vector<RuleApplication> unifyConstraints(const Clause& c, const std::vector<uint32_t>& idx,
                                              const UnifConfig& cfg, size_t maxUnifiers, bool* unsolvable,
                                              bool* boundReached) {
  if (unsolvable) *unsolvable = false;
  if (boundReached) *boundReached = false;
  std::vector<Constraint> cs;
  std::vector<Literal> rest;
  for (uint32_t k = 0; k < c.size(); ++k) {
    const Literal& l = c.literals[k];
    if (std::find(idx.begin(), idx.end(), k) != idx.end()) {
      if (!l.negative()) throw RuleError("unification on a positive literal");
      cs.push_back({l.lhs, l.rhs});
    } else {
      rest.push_back(l);
    }
  }
  std::vector<LitSide> sites;
  for (uint32_t k : idx) sites.push_back(LitSide{k, false});
  auto make = [&](const std::string& rule, const Substitution& s, const std::vector<Literal>& residual) {
    Clause base = withLiterals(c, rest);
    Clause out = applySubstitution(base, s);
    for (const Literal& r : residual) out.literals.push_back(r);
    RuleApplication app = record(rule, c, std::move(out));
    app.sites = sites;
    app.bindings = restrictTo(s, c);
    return app;
  };
  std::vector<RuleApplication> out;
  bool pattern = std::all_of(cs.begin(), cs.end(),
                             [](const Constraint& k) { return isPatternTerm(k.first) && isPatternTerm(k.second); });
  if (pattern) {
    PatternResult r = patternUnify(cs);
    if (r.outcome == PatternOutcome::Unified) {
      out.push_back(make("pattern_uni", r.substitution, {}));
      return out;
    }
    if (r.outcome == PatternOutcome::Failed) {
      if (unsolvable) *unsolvable = true;
      return out;
    }
  }
  PreUnifier u(cs, cfg);
  while (out.size() < maxUnifiers) {
    auto r = u.next();
    if (!r) break;
    out.push_back(make("pre_uni", r->substitution, r->residual));
  }
  if (unsolvable) *unsolvable = u.definitelyFailed();
  if (boundReached) *boundReached = u.boundReached();
  return out;
}

// ---------------------------------------------------------------------------
// Simplification

bool termGreater(Term a, Term b) {
  if (a == b) return false;
  if (isTruthValue(b)) return !isTruthValue(a) || (a == mkTrue() && b == mkFalse());
  if (isTruthValue(a)) return false;
  if (a.size() != b.size()) return a.size() > b.size();
  if (a.hasFreeVars() || b.hasFreeVars()) return false;
  return a.id() > b.id();
}

namespace {

bool varsSubset(Term small, Term big) {
  std::vector<Term> vs = freeVars(big);
  for (const Term& v : freeVars(small))
    if (std::none_of(vs.begin(), vs.end(), [&](const Term& w) { return w.var() == v.var(); })) return false;
  return true;
}

// One rewrite of some subterm of `t` with a -> b.
std::optional<Term> rewriteOnce(Term t, Term a, Term b) {
  for (const Position& pos : closedPositions(t)) {
    Term sub = subtermAt(t, pos);
    if (sub.type() != a.type()) continue;
    Substitution m;
    if (!matchTerm(a, sub, m)) continue;
    return normalize(replaceAt(t, pos, substitute(b, m)));
  }
  return std::nullopt;
}

enum class LitStatus { Keep, Drop, Tautology };

LitStatus inspect(const Literal& l) {
  if (l.lhs == l.rhs) return l.positive() ? LitStatus::Tautology : LitStatus::Drop;
  if (l.isFormula() && l.lhs == mkFalse()) return l.positive() ? LitStatus::Drop : LitStatus::Tautology;
  if (l.rhs == mkFalse() && l.lhs == mkTrue()) return l.positive() ? LitStatus::Drop : LitStatus::Tautology;
  return LitStatus::Keep;
}

}  // namespace

SimplifyResult simplify(const Clause& c, const std::vector<Clause>& units) {
  SimplifyResult res;
  Clause cur = c;
  constexpr int kMaxRounds = 256;
  for (int round = 0; round < kMaxRounds; ++round) {
    bool progress = false;
    // Literal-level deletion, duplicates, complementary pairs.
    std::vector<Literal> kept;
    for (const Literal& l : cur.literals) {
      switch (inspect(l)) {
        case LitStatus::Tautology:
          res.tautology = true;
          res.changed = true;
          return res;
        case LitStatus::Drop:
          progress = true;
          continue;
        case LitStatus::Keep:
          break;
      }
      if (std::find(kept.begin(), kept.end(), l) != kept.end()) {
        progress = true;
        continue;
      }
      Literal opposite{l.lhs, l.rhs, complement(l.polarity)};
      if (std::find(kept.begin(), kept.end(), opposite) != kept.end()) {
        res.tautology = true;
        res.changed = true;
        return res;
      }
      kept.push_back(l);
    }
    cur.literals = std::move(kept);

    // Destructive equality resolution.
    for (uint32_t k = 0; k < cur.size() && !progress; ++k) {
      const Literal& l = cur.literals[k];
      if (!l.negative()) continue;
      for (bool right : {false, true}) {
        auto x = varOf(sideOf(l, right));
        Term other = sideOf(l, !right);
        if (!x || occursFree(*x, other)) continue;
        Substitution sigma;
        sigma.bind(*x, other);
        Clause rest = withLiterals(cur, othersThan(cur, {k}));
        cur = applySubstitution(rest, sigma);
        res.bindings = sigma.after(res.bindings);
        progress = true;
        break;
      }
    }

    // Unit cutting and rewriting.
    for (const Clause& u : units) {
      if (progress) break;
      if (u.size() != 1 || u.id == c.id) continue;
      const Literal& ul = u.literals[0];
      Literal flipped{ul.lhs, ul.rhs, complement(ul.polarity)};
      for (uint32_t k = 0; k < cur.size(); ++k) {
        Substitution m;
        if (cur.literals[k].polarity == flipped.polarity && matchLiteral(flipped, cur.literals[k], m)) {
          cur.literals.erase(cur.literals.begin() + k);
          res.unitsUsed.push_back(u.id);
          progress = true;
          break;
        }
      }
      if (progress || !ul.positive() || resultType(ul.type()) == typeO()) continue;
      Term a = ul.lhs, b = ul.rhs;
      if (!termGreater(a, b)) std::swap(a, b);
      if (!termGreater(a, b) || !varsSubset(b, a) || varOf(a)) continue;
      for (Literal& l : cur.literals) {
        for (bool right : {false, true}) {
          Term s = sideOf(l, right);
          if (isTruthValue(s)) continue;
          if (auto r = rewriteOnce(s, a, b)) {
            Term other = sideOf(l, !right);
            l = right ? Literal::make(other, *r, l.polarity) : Literal::make(*r, other, l.polarity);
            res.unitsUsed.push_back(u.id);
            progress = true;
            break;
          }
        }
        if (progress) break;
      }
    }
    if (!progress) break;
    res.changed = true;
  }
  std::sort(res.unitsUsed.begin(), res.unitsUsed.end());
  res.unitsUsed.erase(std::unique(res.unitsUsed.begin(), res.unitsUsed.end()), res.unitsUsed.end());
  res.clause = cur;
  return res;
}

// ---------------------------------------------------------------------------
// Replay

Term renameSymbols(Term t, const std::map<SymbolId, SymbolId>& m) {
  if (m.empty()) return t;
  switch (t.kind()) {
    case TermKind::Const: {
      auto it = m.find(t.symbol());
      return it == m.end() ? t : mkConst(it->second);
    }
    case TermKind::Abs: return mkAbs(t.binderType(), renameSymbols(t.body(), m));
    case TermKind::App: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(renameSymbols(a, m));
      return mkApp(renameSymbols(t.head(), m), args);
    }
    default: return t;
  }
}

Clause renameSymbols(const Clause& c, const std::map<SymbolId, SymbolId>& m) {
  Clause out = c;
  for (Literal& l : out.literals)
    l = Literal::make(renameSymbols(l.lhs, m), renameSymbols(l.rhs, m), l.polarity);
  return out;
}

namespace {

const Clause& premise(const std::vector<Clause>& ps, size_t i) {
  if (i >= ps.size()) throw RuleError("replay: missing premise");
  return ps[i];
}

// Runs f and maps the symbols it creates onto the recorded ones.
template <class F>
std::vector<Clause> withRecordedSymbols(const std::vector<SymbolId>& recorded, F f) {
  size_t before = ctx().symbolCount();
  std::vector<Clause> out = f();
  size_t after = ctx().symbolCount();
  std::map<SymbolId, SymbolId> m;
  if (after - before == recorded.size())
    for (size_t k = 0; k < recorded.size(); ++k) m[static_cast<SymbolId>(before + k)] = recorded[k];
  for (Clause& c : out) c = renameSymbols(c, m);
  return out;
}

std::vector<Clause> candidates(const RuleApplication& app, const std::vector<Clause>& ps,
                               const PreprocessConfig& pre) {
  const std::string& r = app.rule;
  const Clause& c = premise(ps, 0);
  auto site = [&](size_t k) {
    if (k >= app.sites.size()) throw RuleError("replay: missing literal index");
    return app.sites[k];
  };
  if (r == "paramod_ordered") return {para(c, site(0), app.position, premise(ps, 1), site(1)).produced};
  if (r == "eqfactor_ordered") return {eqfac(c, site(0).literal, site(1)).produced};
  if (r == "prim_subst" || r == "instantiate") {
    if (r == "instantiate")
      for (const auto& [v, t] : app.bindings.bindings()) {
        auto dom = finiteDomain(t.type());
        if (std::find(dom.begin(), dom.end(), t) == dom.end()) throw RuleError("replay: not a domain element");
      }
    return {applySubstitution(c, app.bindings)};
  }
  if (r == "bool_ext") {
    std::vector<Clause> out;
    for (const RuleApplication& a : boolExt(c, site(0).literal)) out.push_back(a.produced);
    return out;
  }
  if (r == "func_ext") {
    if (!app.witness) throw RuleError("replay: func_ext without witness");
    return {funcExt(c, site(0).literal, app.witness).produced};
  }
  if (r == "inj") {
    auto shape = injShape(c);
    if (!shape || app.introduced.size() != 1) throw RuleError("replay: premise is not an injectivity clause");
    return {injWith(c, shape->f, app.introduced[0]).produced};
  }
  if (r == "pre_uni" || r == "pattern_uni") {
    std::vector<Literal> rest, solved;
    for (uint32_t k = 0; k < c.size(); ++k) {
      bool hit = std::any_of(app.sites.begin(), app.sites.end(), [&](const LitSide& s) { return s.literal == k; });
      (hit ? solved : rest).push_back(c.literals[k]);
    }
    Clause out = applySubstitution(withLiterals(c, rest), app.bindings);
    // Extra literals of the recorded conclusion must be flex-flex residuals.
    std::vector<Literal> extra = app.produced.literals;
    for (const Literal& l : out.literals) {
      auto it = std::find(extra.begin(), extra.end(), l);
      if (it != extra.end()) extra.erase(it);
    }
    for (const Literal& l : extra) {
      if (!isFlexFlex(l) || r == "pattern_uni") throw RuleError("replay: unexpected residual literal");
      out.literals.push_back(l);
    }
    if (extra.empty())
      for (const Literal& l : solved)
        if (substitute(l.lhs, app.bindings) != substitute(l.rhs, app.bindings))
          throw RuleError("replay: constraint not solved");
    return {out};
  }
  if (r == "simp" || r == "rewrite") {
    std::vector<Clause> units(ps.begin() + 1, ps.end());
    SimplifyResult s = simplify(c, units);
    std::vector<Clause> out;
    if (s.clause) out.push_back(*s.clause);
    if (r == "simp") out.push_back(replaceDefinedEqualities(c));
    return out;
  }
  if (r == "cnf") return withRecordedSymbols(app.introduced, [&] { return normalize(c, pre); });
  throw RuleError("replay: unknown rule '" + r + "'");
}

}  // namespace

Clause replay(const RuleApplication& app, const std::vector<Clause>& premises, const PreprocessConfig& pre) {
  std::vector<Clause> cs = candidates(app, premises, pre);
  if (cs.empty()) throw RuleError("replay: rule produced nothing");
  for (const Clause& c : cs)
    if (sameMultiset(c.literals, app.produced.literals) || isVariant(c, app.produced)) return c;
  return cs.front();
}

bool replayMatches(const RuleApplication& app, const std::vector<Clause>& premises, const PreprocessConfig& pre) {
  try {
    Clause c = replay(app, premises, pre);
    if (c.size() != app.produced.size()) return false;
    if (isVariant(c, app.produced)) return true;
    return sameMultiset(c.literals, app.produced.literals);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace ep
