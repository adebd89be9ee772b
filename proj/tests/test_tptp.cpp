#include "doctest.h"
#include "ep/tptp.hpp"
#include "support.hpp"

using namespace ep;

namespace {

const char* kBecker = R"(
thf(s5_spec, logic, ($modal := [
      $constants := $rigid, $quantification := $constant,
      $consequence := $global, $modalities := $modal_system_S5 ])).
thf(becker,conjecture,( ! [P:$i>$o,F:$i>$i, X:$i]: (? [G:$i>$i]:
      (($dia @ ($box @ (P @ (F @ X)))) => ($box @ (P @ (G @ X))))))).
)";

}  // namespace

TEST_CASE("modal header and conjecture") {
  ContextScope scope;
  Problem p = parseProblem(kBecker);
  REQUIRE(p.logicSpec);
  CHECK(p.logicSpec->system == "S5");
  CHECK(p.logicSpec->constants == "rigid");
  CHECK(p.logicSpec->quantification == "constant");
  CHECK(p.logicSpec->consequence == Consequence::Global);
  CHECK(p.conjectureCount() == 1);
  CHECK(p.usesModalOperators());
}

TEST_CASE("trivial conjecture") {
  ContextScope scope;
  Problem p = parseProblem("thf(1,conjecture,$true).");
  REQUIRE(p.formulas.size() == 1);
  CHECK(p.formulas[0].formula == mkTrue());
}

TEST_CASE("syntax errors carry positions") {
  ContextScope scope;
  try {
    parseProblem("thf(a, axiom,\n  $true & ).");
    FAIL("expected a parse error");
  } catch (const UnsupportedInput&) {
    FAIL("wrong error class");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
}

TEST_CASE("type errors name the formula") {
  ContextScope scope;
  try {
    parseProblem("thf(c_t,type,c: $i).\nthf(bad,axiom,c).");
    FAIL("expected a type error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  CHECK_THROWS_AS(parseProblem("thf(f_t,type,f: $i > $i).\nthf(bad2,axiom,f @ $true = f)."), ParseError);
}

TEST_CASE("type quantification is unsupported input") {
  ContextScope scope;
  CHECK_THROWS_AS(parseProblem("thf(1, conjecture, ! [T: $tType]: $true)."), UnsupportedInput);
  CHECK_THROWS_AS(parseProblem("fof(1, axiom, p)."), UnsupportedInput);
  CHECK_THROWS_AS(parseProblem(R"(thf(s, logic, $modal := [ $constants := $rigid,
      $quantification := $varying, $consequence := $global, $modalities := $modal_system_K ]).)"),
                  UnsupportedInput);
}

TEST_CASE("parser never crashes on truncated input") {
  ContextScope scope;
  std::string text = kBecker;
  for (size_t n = 0; n < text.size(); ++n) {
    ContextScope inner;
    try {
      parseProblem(text.substr(0, n));
    } catch (const ParseError&) {
    }
  }
}

TEST_CASE("connectives and equalities") {
  ContextScope scope;
  Problem p = parseProblem(R"(
thf(i_t,type,ind: $tType).
thf(a_t,type,a: ind).
thf(p_t,type,p: ind > $o).
thf(f1,axiom,(p @ a) <=> ~ (a != a)).
)");
  Term f1 = p.formulas[3].formula;
  Term a = mkConst(*ctx().lookup("a"));
  Term pa = mkApp(mkConst(*ctx().lookup("p")), {a});
  CHECK(f1 == mkEquiv(pa, mkNot(mkNot(mkEq(a, a)))));
}

TEST_CASE("print then parse round trip") {
  for (uint32_t seed = 0; seed < 1000; ++seed) {
    ContextScope scope;
    Context& c = ctx();
    std::vector<SymbolId> syms = {c.declare("a", typeI()), c.declare("f", funType(typeI(), typeI())),
                                  c.declare("p", funType(typeI(), typeO())),
                                  c.declare("q", funType(funType(typeI(), typeO()), typeO()))};
    testing::TermGen gen(seed, syms);
    Problem p;
    p.name = "rt";
    for (SymbolId s : syms) {
      AnnotatedFormula d;
      d.name = ctx().symbol(s).name + "_type";
      d.role = Role::Type;
      d.declaredName = ctx().symbol(s).name;
      d.declaredType = ctx().symbol(s).type;
      p.formulas.push_back(d);
    }
    for (int k = 0; k < 3; ++k) {
      AnnotatedFormula f;
      f.name = "ax" + std::to_string(k);
      f.role = k == 2 ? Role::Conjecture : Role::Axiom;
      f.formula = gen.closed(typeO(), 4);
      p.formulas.push_back(f);
    }
    std::string text = printProblem(p);
    Problem q = parseProblem(text);
    REQUIRE(q.formulas.size() == p.formulas.size());
    for (size_t i = 0; i < p.formulas.size(); ++i) {
      CHECK(q.formulas[i].name == p.formulas[i].name);
      CHECK(q.formulas[i].role == p.formulas[i].role);
      if (p.formulas[i].formula) CHECK_MESSAGE(normalize(q.formulas[i].formula) == normalize(p.formulas[i].formula), text);
    }
    CHECK(tokenize(printProblem(q)) == tokenize(text));
  }
}

TEST_CASE("szs lines") {
  CHECK(printSzs(SzsStatus::Theorem, "sur_cantor_th1.p") == "% SZS status Theorem for sur_cantor_th1.p");
  CHECK(printSzs(SzsStatus::Timeout, "X") == "% SZS status Timeout for X");
  CHECK(printSzs(SzsStatus::ContradictoryAxioms, "X") == "% SZS status ContradictoryAxioms for X");
}

TEST_CASE("proof clause rendering") {
  ContextScope scope;
  parseProblem(R"(
thf(mworld_type,type,( mworld: $tType )).
thf(mrel_type,type,( mrel: mworld > mworld > $o )).
thf(sk1_type,type,( sk1: mworld )).
thf(sk5_type,type,( sk5: mworld )).
)");
  Type w = baseType("mworld");
  Term rel = mkConst(*ctx().lookup("mrel"));
  Term sk1 = mkConst(*ctx().lookup("sk1"));
  Term sk5 = mkConst(*ctx().lookup("sk5"));
  Term x = mkFreshVar(w);
  Clause c{{Literal::formula(mkApp(rel, {sk1, x}), Polarity::Negative),
            Literal::formula(mkApp(rel, {sk5, x}), Polarity::Positive)}};
  CHECK(tokenize(printClause(c)) ==
        tokenize("! [A: mworld] : ( ~ ( mrel @ sk1 @ A ) | ( mrel @ sk5 @ A ) )"));
  Clause unit{{Literal::formula(mkApp(rel, {sk1, sk5}), Polarity::Positive)}};
  CHECK(printClause(unit) == "mrel @ sk1 @ sk5");
  Clause eq{{Literal::make(mkApp(rel, {sk1, sk5}), mkApp(rel, {x, sk5}), Polarity::Negative)}};
  std::string s = printClause(eq);
  CHECK(s.find("!=") != std::string::npos);
}

TEST_CASE("proof printing validates the DAG") {
  std::vector<ProofLine> lines(2);
  lines[0] = ProofLine{"1", "conjecture", "$true", std::nullopt, "t.p", "1"};
  lines[1].name = "2";
  lines[1].role = "plain";
  lines[1].formula = "$false";
  lines[1].isFalse = true;
  lines[1].inference = InferenceRecord{"neg_conjecture", "cth", {"1"}, {}};
  std::string out = printProof({}, lines, "t.p");
  CHECK(out.find("% SZS output start CNFRefutation for t.p") == 0);
  CHECK(out.find("inference(neg_conjecture,[status(cth)],[1])") != std::string::npos);
  lines[1].inference->parents = {"7"};
  CHECK_THROWS_AS(printProof({}, lines, "t.p"), std::invalid_argument);
  lines[1].inference->parents = {"1"};
  lines[1].inference->rule = "magic";
  CHECK_THROWS_AS(printProof({}, lines, "t.p"), std::invalid_argument);
}
