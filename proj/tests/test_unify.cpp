#include "doctest.h"
#include "ep/tptp.hpp"
#include "ep/unify.hpp"
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

}  // namespace

TEST_CASE("general bindings") {
  ContextScope scope;
  Type oi = funType(typeI(), typeO());
  auto gb = generalBindings(oi, ctx().logical(Logical::Not));
  REQUIRE(gb.size() == 1);
  CHECK(gb[0].imitation);
  // lambda X. ~ (H X)
  Term b = gb[0].binding;
  REQUIRE(b.isAbs());
  CHECK(b.body().logicalHead() == Logical::Not);
  Term inner = b.body().args()[0];
  CHECK(inner.head().isFree());
  CHECK(inner.head().type() == oi);

  auto proj = generalBindings(funType(typeI(), typeI()), std::nullopt);
  REQUIRE(proj.size() == 1);
  CHECK_FALSE(proj[0].imitation);
  CHECK(proj[0].binding == mkAbs(typeI(), mkBound(0, typeI())));

  auto top = generalBindings(typeO(), ctx().logical(Logical::True));
  REQUIRE(top.size() == 1);
  CHECK(top[0].binding == mkTrue());
}

TEST_CASE("trivial constraint") {
  ContextScope scope;
  Term a = mkConst(ctx().declare("a", typeI()));
  auto rs = preUnify({{a, a}}, 8, 4);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].substitution.empty());
  CHECK(rs[0].residual.empty());
}

TEST_CASE("rigid clash is a definitive failure") {
  ContextScope scope;
  Term a = mkConst(ctx().declare("a", typeI()));
  Term b = mkConst(ctx().declare("b", typeI()));
  PreUnifier u({{a, b}});
  CHECK_FALSE(u.next());
  CHECK(u.definitelyFailed());
  CHECK_FALSE(u.boundReached());
}

TEST_CASE("depth bound is distinguished from failure") {
  ContextScope scope;
  Term g = mkConst(ctx().declare("g", funType(typeI(), typeI())));
  Term a = mkConst(ctx().declare("a", typeI()));
  Term x = var(funType(typeI(), typeI()));
  // X (g a) = g (X a) has infinitely many solutions lambda z. g^n z.
  UnifConfig cfg;
  cfg.depthBudget = 3;
  PreUnifier u({{app(x, {app(g, {a})}), app(g, {app(x, {a})})}}, cfg);
  size_t n = 0;
  while (u.next()) ++n;
  CHECK(n >= 2);
  CHECK(u.boundReached());
  CHECK_FALSE(u.definitelyFailed());
}

TEST_CASE("cantor factoring unifier") {
  ContextScope scope;
  Type oi = funType(typeI(), typeO());
  Term sk1 = mkConst(ctx().declare("sk1", funType(typeI(), oi)));
  Term sk2 = mkConst(ctx().declare("sk2", funType(oi, typeI())));
  Term fv5 = var(oi);
  Term fv2 = var(typeI());
  // sk1 (sk2 (lambda Z. ~ (FV5 Z))) FV2 = FV5 FV2
  Term diag = mkAbs(typeI(), mkNot(mkApp(fv5, {mkBound(0, typeI())})));
  Term lhs = app(sk1, {app(sk2, {diag}), fv2});
  Term rhs = app(fv5, {fv2});
  auto rs = preUnify({{lhs, rhs}}, 8, 16);
  Term z = mkBound(0, typeI());
  Term expected5 = mkAbs(typeI(), mkApp(sk1, {z, z}));
  Term expected2 = app(sk2, {mkAbs(typeI(), mkNot(mkApp(sk1, {z, z})))});
  bool found = false;
  for (const auto& r : rs) {
    auto s5 = r.substitution.lookup(idOf(fv5));
    auto s2 = r.substitution.lookup(idOf(fv2));
    if (s5 && s2 && normalize(*s5) == normalize(expected5) && *s2 == expected2) found = true;
  }
  CHECK(found);
}

TEST_CASE("imitation and projection for F a = g a are exhaustive") {
  ContextScope scope;
  SymbolId gs = ctx().declare("g", funType(typeI(), typeI()));
  SymbolId as = ctx().declare("a", typeI());
  Term g = mkConst(gs), a = mkConst(as);
  Type ii = funType(typeI(), typeI());
  Term f = var(ii);
  std::vector<Constraint> cs = {{app(f, {a}), app(g, {a})}};
  auto rs = preUnify(cs, 8, 100);
  // Oracle: every closed F up to depth 3 with F a = g a.
  std::vector<Term> solutions;
  for (Term cand : testing::enumerateClosed(ii, 3, {gs, as}))
    if (normalize(mkApp(cand, {a})) == app(g, {a})) solutions.push_back(cand);
  CHECK(solutions.size() == 2);  // lambda X. g X and lambda X. g a
  for (Term sol : solutions) {
    bool covered = false;
    for (const auto& r : rs) {
      Substitution delta;
      auto img = r.substitution.lookup(idOf(f));
      if (img && matchTerm(*img, sol, delta)) covered = true;
    }
    CHECK_MESSAGE(covered, printTerm(sol));
  }
}

TEST_CASE("pattern unification") {
  ContextScope scope;
  Term f = mkConst(ctx().declare("f", funType(typeI(), typeI())));
  Term a = mkConst(ctx().declare("a", typeI()));
  Term x = var(typeI());
  auto r = patternUnify({{x, app(f, {a})}});
  REQUIRE(r.outcome == PatternOutcome::Unified);
  CHECK(*r.substitution.lookup(idOf(x)) == app(f, {a}));

  CHECK(patternUnify({{x, app(f, {x})}}).outcome == PatternOutcome::Failed);

  Term y = var(funType(typeI(), typeI()));
  CHECK(patternUnify({{app(y, {a}), a}}).outcome == PatternOutcome::NotPattern);
}

TEST_CASE("pattern unifier for an accessibility literal") {
  ContextScope scope;
  parseProblem(R"(
thf(mworld_type,type,( mworld: $tType )).
thf(mrel_type,type,( mrel: mworld > mworld > $o )).
thf(sk1_type,type,( sk1: mworld )).
thf(sk5_type,type,( sk5: mworld )).
)");
  Type w = baseType("mworld");
  Term rel = sym("mrel");
  Term a = var(w), b = var(w);
  auto r = patternUnify({{app(rel, {sym("sk1"), sym("sk5")}), app(rel, {a, b})}});
  REQUIRE(r.outcome == PatternOutcome::Unified);
  CHECK(*r.substitution.lookup(idOf(a)) == sym("sk1"));
  CHECK(*r.substitution.lookup(idOf(b)) == sym("sk5"));
}

TEST_CASE("pattern unifiers are most general on generated instances") {
  for (uint32_t seed = 0; seed < 200; ++seed) {
    ContextScope scope;
    SymbolId fs = ctx().declare("f", funType(typeI(), funType(typeI(), typeI())));
    SymbolId as = ctx().declare("a", typeI());
    Type ii = funType(typeI(), typeI());
    std::mt19937 rng(seed);
    // lambda z. F z = lambda z. f (G z) t with t over {a, z}
    Term F = var(ii), G = var(ii);
    Term z = mkBound(0, typeI());
    Term t = rng() % 2 ? z : mkConst(as);
    Term lhs = mkAbs(typeI(), mkApp(F, {z}));
    Term rhs = mkAbs(typeI(), mkApp(mkConst(fs), {mkApp(G, {z}), t}));
    auto r = patternUnify({{normalize(lhs), normalize(rhs)}});
    REQUIRE(r.outcome == PatternOutcome::Unified);
    // Any ground unifier factors through the result.
    for (Term g : testing::enumerateClosed(ii, 2, {fs, as})) {
      Substitution theta;
      theta.bind(idOf(G), g);
      Term fImg = normalize(substitute(rhs, theta));
      Substitution delta;
      CHECK(matchTerm(*r.substitution.lookup(idOf(F)), fImg, delta));
    }
  }
}

TEST_CASE("flex-flex residuals and the optional FlexFlex rule") {
  ContextScope scope;
  Term a = mkConst(ctx().declare("a", typeI()));
  Type ii = funType(typeI(), typeI());
  Term x = var(ii), y = var(ii);
  std::vector<Constraint> cs = {{app(x, {a}), app(y, {a})}};
  auto rs = preUnify(cs, 8, 4);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].residual.size() == 1);
  UnifConfig cfg;
  cfg.flexFlexRule = true;
  cfg.depthBudget = 3;
  PreUnifier u(cs, cfg);
  auto first = u.next();
  REQUIRE(first);
  CHECK(first->residual.empty());
}
