#include "doctest.h"
#include "ep/calculus.hpp"
#include "ep/cnf.hpp"
#include "ep/tptp.hpp"
#include "support.hpp"

using namespace ep;

namespace {

Term sym(const std::string& n) { return mkConst(*ctx().lookup(n)); }

Term var(Type t) { return etaExpandAtom(mkFreshVar(t)); }

Term app(Term h, std::initializer_list<Term> args) { return normalize(mkApp(h, args)); }

VarId idOf(Term v) {
  while (v.isAbs()) v = v.body();
  return v.head().var();
}

Clause clause(std::vector<Literal> lits, uint64_t id = 0) {
  Clause c(std::move(lits));
  c.id = id;
  return c;
}

Literal pos(Term s) { return Literal::formula(s, Polarity::Positive); }
Literal neg(Term s) { return Literal::formula(s, Polarity::Negative); }

// Solves the fresh constraints of a generated clause and simplifies.
std::vector<Clause> solve(const RuleApplication& a, size_t maxUnifiers = 8) {
  std::vector<uint32_t> idx;
  uint32_t n = static_cast<uint32_t>(a.produced.size());
  for (uint32_t k = n - a.constraints; k < n; ++k) idx.push_back(k);
  std::vector<Clause> out;
  std::vector<RuleApplication> us;
  if (idx.empty()) us.push_back(a);
  else us = unifyConstraints(a.produced, idx, UnifConfig{}, maxUnifiers);
  for (const RuleApplication& u : us) {
    SimplifyResult s = simplify(u.produced, {});
    if (s.clause) out.push_back(*s.clause);
  }
  return out;
}

std::vector<Clause> renormalize(const std::vector<Clause>& cs) {
  std::vector<Clause> out;
  for (const Clause& c : cs)
    for (Clause& d : normalize(c)) out.push_back(std::move(d));
  return out;
}

uint32_t flexLiteral(const Clause& c) {
  for (uint32_t k = 0; k < c.size(); ++k)
    if (c.literals[k].lhs.isFlex()) return k;
  return static_cast<uint32_t>(c.size());
}

bool holds(testing::FiniteModel& m, const Clause& c) {
  for (const Literal& l : c.literals)
    if ((m.eval(l.lhs) == m.eval(l.rhs)) == l.positive()) return true;
  return false;
}

// Every valuation of the propositional symbols satisfying all premises
// satisfies the conclusion.
bool groundSound(const std::vector<Clause>& premises, const Clause& conclusion, const std::vector<SymbolId>& props) {
  testing::FiniteModel m;
  bool ok = true;
  m.forAll(props, {}, [&] {
    for (const Clause& p : premises)
      if (!holds(m, p)) return true;
    if (!holds(m, conclusion)) ok = false;
    return ok;
  });
  return ok;
}

}  // namespace

TEST_CASE("surjective Cantor derivation") {
  ContextScope scope;
  Term conj = normalize(parseFormula("~ ? [F: $i > $i > $o]: ! [Y: $i > $o]: ? [X: $i]: ((F @ X) = Y)"));
  auto c1s = normalize(Clause({Literal::formula(mkNot(conj), Polarity::Positive)}));
  REQUIRE(c1s.size() == 1);
  Clause c1 = c1s[0];
  c1.id = 1;
  PrimSubstHeads heads{{typeI()}};

  RuleApplication pfe = funcExt(c1, 0);
  CHECK(pfe.produced.literals[0].type() == typeO());
  CHECK(replayMatches(pfe, {c1}));
  Clause c2 = pfe.produced;
  auto pbe = boolExt(c2, 0);
  REQUIRE(pbe.size() == 2);
  for (const auto& a : pbe) CHECK(replayMatches(a, {c2}));

  // One side of each PBE conclusion gets the ~ approximation, then EqFac
  // and unification collapse it to a ground unit.
  std::vector<Clause> units[2];
  for (int k = 0; k < 2; ++k) {
    Clause c = pbe[k].produced;
    uint32_t flex = flexLiteral(c);
    REQUIRE(flex < c.size());
    auto ps = primSubst(c, flex, heads);
    REQUIRE_FALSE(ps.empty());
    CHECK(ps[0].bindings.size() == 1);
    for (Clause& c5 : renormalize({ps[0].produced})) {
      REQUIRE(c5.size() == 2);
      CHECK(c5.literals[0].polarity == c5.literals[1].polarity);
      for (const RuleApplication& fac : eqfacInferences(c5))
        for (Clause& c7 : solve(fac))
          if (c7.size() == 1 && isGround(c7)) units[k].push_back(c7);
    }
  }
  REQUIRE_FALSE(units[0].empty());
  REQUIRE_FALSE(units[1].empty());

  bool refuted = false;
  for (Clause c7 : units[0]) {
    for (Clause c8 : units[1]) {
      Clause& p = c7.literals[0].positive() ? c7 : c8;
      Clause& n = c7.literals[0].positive() ? c8 : c7;
      p.id = 7;
      n.id = 8;
      for (const RuleApplication& pa : paraInferences(n, p)) {
        CHECK(replayMatches(pa, {n, p}));
        for (const Clause& e : solve(pa))
          if (e.empty()) refuted = true;
      }
    }
  }
  CHECK(refuted);
}

TEST_CASE("para rewriting with x = x yields a variant") {
  ContextScope scope;
  parseProblem("thf(p_t,type,p: $i > $o).\nthf(a_t,type,a: $i).");
  Term x = var(typeI());
  Clause refl = clause({Literal::make(x, x, Polarity::Positive)}, 2);
  Clause c = clause({pos(app(sym("p"), {sym("a")}))}, 1);
  RuleApplication r = para(c, LitSide{0, false}, {PositionStep{PositionStep::Kind::Arg, 0}}, refl, LitSide{0, false});
  auto solved = solve(r);
  REQUIRE(solved.size() == 1);
  CHECK(isVariant(solved[0], c));
}

TEST_CASE("para preconditions") {
  ContextScope scope;
  ctx().declare("p", typeO());
  ctx().declare("q", typeO());
  Term p = sym("p"), q = sym("q");
  Clause c = clause({pos(p)}, 1), d = clause({pos(q)}, 2), e = clause({neg(q)}, 3);
  CHECK_FALSE(paraPermitted(c, {0, false}, {}, d, {0, false}));
  CHECK(paraPermitted(e, {0, false}, {}, d, {0, false}));
  CHECK_THROWS_AS(para(c, {0, false}, {}, e, {0, false}), RuleError);
  Term a = mkConst(ctx().declare("a", typeI()));
  Clause ai = clause({Literal::make(a, a, Polarity::Positive)}, 4);
  CHECK_THROWS_AS(para(c, {0, false}, {}, ai, {0, false}), RuleError);
}

TEST_CASE("duplicate factoring") {
  ContextScope scope;
  Term p = mkConst(ctx().declare("p", typeO()));
  Clause c = clause({pos(p), pos(p)}, 1);
  auto facs = eqfacInferences(c);
  REQUIRE_FALSE(facs.empty());
  auto out = solve(facs[0]);
  REQUIRE(out.size() == 1);
  CHECK(out[0].literals == std::vector<Literal>{pos(p)});
  CHECK_THROWS_AS(eqfac(clause({pos(p), neg(p)}), 0, LitSide{1, false}), RuleError);
}

TEST_CASE("primitive substitution") {
  ContextScope scope;
  Term pv = var(typeO());
  Clause c = clause({pos(pv)}, 1);
  auto ps = primSubst(c, 0, PrimSubstHeads{{typeI()}});
  REQUIRE(ps.size() == 4);
  // ~ approximation: [P]^tt -> [~ P']^tt -> [P']^ff
  auto cnf = normalize(ps[0].produced);
  REQUIRE(cnf.size() == 1);
  REQUIRE(cnf[0].size() == 1);
  CHECK(cnf[0].literals[0].negative());
  CHECK(cnf[0].literals[0].lhs.isFlex());
  CHECK(cnf[0].psDepth == 1);
  CHECK(ps[0].produced.psDepth == 1);
  Term q = mkConst(ctx().declare("q", typeO()));
  CHECK(primSubst(clause({pos(q)}), 0, PrimSubstHeads{{typeI()}}).empty());
}

TEST_CASE("extensionality rules") {
  ContextScope scope;
  parseProblem("thf(f_t,type,f: $i > $i).\nthf(g_t,type,g: $i > $i).\nthf(p_t,type,p: $o).\nthf(q_t,type,q: $o).");
  Clause c = clause({Literal::make(sym("f"), sym("g"), Polarity::Negative)}, 1);
  RuleApplication nfe = funcExt(c, 0);
  REQUIRE(nfe.introduced.size() == 1);
  CHECK(ctx().symbol(nfe.introduced[0]).type == typeI());
  CHECK(nfe.status == "esa");
  CHECK(nfe.produced.literals[0].type() == typeI());
  CHECK(nfe.produced.literals[0].negative());
  CHECK(replayMatches(nfe, {c}));

  Clause e = clause({Literal::make(sym("p"), sym("q"), Polarity::Positive)}, 2);
  auto pbe = boolExt(e, 0);
  REQUIRE(pbe.size() == 2);
  SymbolId ps = *ctx().lookup("p"), qs = *ctx().lookup("q");
  for (const auto& a : pbe) CHECK(groundSound({e}, a.produced, {ps, qs}));
  Clause en = clause({Literal::make(sym("p"), sym("q"), Polarity::Negative)}, 3);
  for (const auto& a : boolExt(en, 0)) CHECK(groundSound({en}, a.produced, {ps, qs}));
  CHECK_THROWS_AS(boolExt(clause({pos(sym("p"))}), 0), RuleError);
  CHECK_THROWS_AS(funcExt(e, 0), RuleError);
}

TEST_CASE("injectivity") {
  ContextScope scope;
  Type oi = funType(typeI(), typeO());
  SymbolId sk = ctx().declare("sk", funType(oi, typeI()), SymbolKind::Skolem);
  Term x = var(oi), y = var(oi);
  Clause c0 = clause({Literal::make(app(mkConst(sk), {x}), app(mkConst(sk), {y}), Polarity::Negative),
                      Literal::make(x, y, Polarity::Positive)},
                     1);
  std::set<SymbolId> inverted;
  auto r = injRule(c0, inverted);
  REQUIRE(r);
  REQUIRE(r->introduced.size() == 1);
  CHECK(ctx().symbol(r->introduced[0]).type == funType(typeI(), oi));
  REQUIRE(r->produced.size() == 1);
  CHECK(r->produced.literals[0].positive());
  CHECK(r->produced.literals[0].type() == oi);
  CHECK(replayMatches(*r, {c0}));
  CHECK_FALSE(injRule(c0, inverted));
  Clause other = clause({Literal::make(x, y, Polarity::Positive)});
  CHECK_FALSE(injRule(other, inverted));
}

TEST_CASE("exhaustive instantiation") {
  ContextScope scope;
  Term p = var(typeO());
  Clause c = clause({pos(p)}, 1);
  auto rs = exhaustiveInstantiate(c, p.var(), typeO());
  REQUIRE(rs.size() == 2);
  auto s0 = simplify(rs[0].produced, {});
  CHECK(s0.tautology);
  auto s1 = simplify(rs[1].produced, {});
  REQUIRE(s1.clause);
  CHECK(s1.clause->empty());
  Type oo = funType(typeO(), typeO());
  Term h = var(oo);
  CHECK(exhaustiveInstantiate(clause({pos(app(h, {mkTrue()}))}), idOf(h), oo).size() == 4);
  CHECK_THROWS_AS(finiteDomain(typeI()), RuleError);
}

TEST_CASE("simplification") {
  ContextScope scope;
  parseProblem("thf(p_t,type,p: $i > $o).\nthf(a_t,type,a: $i).\nthf(b_t,type,b: $i).\nthf(q_t,type,q: $o).");
  Term x = var(typeI());
  Term pa = app(sym("p"), {sym("a")});
  Clause c = clause({Literal::make(x, sym("a"), Polarity::Negative), pos(app(sym("p"), {x}))});
  auto r = simplify(c, {});
  REQUIRE(r.clause);
  CHECK(r.clause->literals == std::vector<Literal>{pos(pa)});

  Clause dup = clause({pos(sym("q")), pos(sym("q"))});
  CHECK(simplify(dup, {}).clause->literals == std::vector<Literal>{pos(sym("q"))});

  Clause taut = clause({Literal::make(sym("a"), sym("a"), Polarity::Positive), pos(sym("q"))});
  CHECK(simplify(taut, {}).tautology);
  CHECK(simplify(clause({pos(sym("q")), neg(sym("q"))}), {}).tautology);

  // Unit cutting removes the literal contradicting a unit.
  Clause unit = clause({neg(pa)}, 12);
  Clause target = clause({pos(pa), pos(sym("q"))}, 258);
  auto cut = simplify(target, {unit});
  REQUIRE(cut.clause);
  CHECK(cut.clause->literals == std::vector<Literal>{pos(sym("q"))});
  CHECK(cut.unitsUsed == std::vector<uint64_t>{12});
  RuleApplication rec;
  rec.rule = "rewrite";
  rec.premises = {258, 12};
  rec.produced = *cut.clause;
  CHECK(replayMatches(rec, {target, unit}));

  // Rewriting with an oriented unit equation.
  Term fa = app(sym("p"), {sym("b")});
  Clause eq = clause({Literal::make(sym("b"), sym("a"), Polarity::Positive)}, 5);
  auto rw = simplify(clause({pos(fa), pos(sym("q"))}, 6), {eq});
  REQUIRE(rw.clause);
  bool oriented = termGreater(sym("b"), sym("a"));
  CHECK(rw.clause->literals[0] == pos(oriented ? pa : fa));
}

TEST_CASE("ground propositional soundness of every rule") {
  for (uint32_t seed = 0; seed < 300; ++seed) {
    ContextScope scope;
    std::vector<SymbolId> props;
    for (const char* n : {"p", "q", "r"}) props.push_back(ctx().declare(n, typeO()));
    std::mt19937 rng(seed);
    auto atom = [&]() -> Term {
      uint32_t k = rng() % 5;
      if (k < 3) return mkConst(props[k]);
      return k == 3 ? mkNot(mkConst(props[rng() % 3])) : mkOr(mkConst(props[rng() % 3]), mkConst(props[rng() % 3]));
    };
    auto literal = [&]() {
      Polarity p = rng() % 2 ? Polarity::Positive : Polarity::Negative;
      if (rng() % 3 == 0) return Literal::make(atom(), atom(), p);
      return Literal::formula(atom(), p);
    };
    auto mk = [&](uint64_t id) {
      std::vector<Literal> lits;
      size_t n = 1 + rng() % 3;
      for (size_t k = 0; k < n; ++k) lits.push_back(literal());
      return clause(std::move(lits), id);
    };
    Clause c = mk(1), d = mk(2);
    std::vector<RuleApplication> apps = paraInferences(c, d);
    for (auto& a : eqfacInferences(c)) apps.push_back(a);
    for (uint32_t k = 0; k < c.size(); ++k)
      if (c.literals[k].type() == typeO() && !c.literals[k].isFormula())
        for (auto& a : boolExt(c, k)) apps.push_back(a);
    Clause unit = clause({c.literals[0]}, 3);
    auto s = simplify(d, {unit});
    for (const RuleApplication& a : apps) {
      std::vector<Clause> premises = {c};
      if (a.rule == "paramod_ordered") premises.push_back(d);
      CHECK(groundSound(premises, a.produced, props));
      CHECK(replayMatches(a, premises));
      for (const Clause& solved : solve(a)) CHECK(groundSound(premises, solved, props));
    }
    if (s.clause) CHECK(groundSound({d, unit}, *s.clause, props));
    PreprocessConfig noNaming;
    noNaming.namingThreshold = 1u << 20;
    for (const Clause& n : normalize(c, noNaming)) CHECK(groundSound({c}, n, props));
  }
}

TEST_CASE("fresh symbols never collide") {
  ContextScope scope;
  parseProblem("thf(f_t,type,f: $i > $i).\nthf(g_t,type,g: $i > $i).\nthf(sk1_t,type,sk1: $i).");
  Clause c = clause({Literal::make(sym("f"), sym("g"), Polarity::Negative)}, 1);
  std::set<std::string> names;
  for (int k = 0; k < 10000; ++k) {
    RuleApplication r = funcExt(c, 0);
    names.insert(ctx().symbol(r.introduced[0]).name);
  }
  CHECK(names.size() == 10000);
  CHECK(names.count("sk1") == 0);
}
