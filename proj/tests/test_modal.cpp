#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ep/modal.hpp"
#include "ep/saturation.hpp"

using namespace ep;

namespace {

using Tokens = std::vector<std::string>;

std::string readFile(const std::string& rel) {
  std::ifstream in(std::string(EP_SOURCE_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Token streams of the annotated formulas in `text`.
std::vector<Tokens> annotated(const std::string& text) {
  std::vector<Tokens> out;
  Tokens cur;
  int depth = 0;
  for (const std::string& t : tokenize(text)) {
    cur.push_back(t);
    if (t == "(") ++depth;
    if (t == ")") --depth;
    if (t == "." && depth == 0) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

std::string name(const Tokens& f) { return f.size() > 2 ? f[2] : ""; }

std::string header(const std::string& spec) {
  return "thf(spec,logic,( $modal := [ $constants := $rigid, $quantification := $constant, "
         "$consequence := $" +
         spec + " ] )).\n";
}

std::string embedText(const std::string& text, EmbedOptions opts = {}) {
  ContextScope scope;
  return embed(parseProblem(text), opts).text;
}

struct ModalRun {
  ProverResult result;
  Problem problem;
};

ModalRun proveModal(const std::string& text, double seconds, EmbedOptions opts = {}) {
  std::string classical = embedText(text, opts);
  ParseOptions po;
  po.problemName = "becker.p";
  ModalRun r;
  r.problem = parseProblem(classical, po);
  ProverConfig cfg;
  cfg.timeLimit = seconds;
  r.result = prove(r.problem, cfg);
  return r;
}

SzsStatus status(const std::string& text, double seconds, EmbedOptions opts = {}) {
  ContextScope scope;
  return proveModal(text, seconds, opts).result.status;
}

const std::string kProps = "thf(p_t,type,p: $o).\nthf(q_t,type,q: $o).\n";

std::string logicOf(const std::string& s, const std::string& consequence = "global") {
  return header(consequence + ", $modalities := $modal_system_" + s);
}

}  // namespace

TEST_CASE("Becker definition block token-matches the reference listing") {
  std::vector<Tokens> golden = annotated(readFile("tests/golden/becker_definitions.p"));
  REQUIRE(golden.size() == 20);
  std::string becker = readFile("tests/problems/becker_S5.p");

  SUBCASE("embedding output contains every reference formula") {
    std::vector<Tokens> out = annotated(embedText(becker));
    for (const Tokens& g : golden) CHECK_MESSAGE(std::find(out.begin(), out.end(), g) != out.end(), name(g));
  }
  SUBCASE("proof header equals the reference block") {
    ContextScope scope;
    ModalRun run = proveModal(becker, 60);
    REQUIRE(run.result.status == SzsStatus::Theorem);
    CHECK(run.result.proofChecked);
    std::vector<Tokens> lines = annotated(renderProof(run.result, run.problem));
    std::vector<Tokens> block;
    for (const Tokens& l : lines) {
      if (name(l).rfind("sk", 0) == 0) break;
      block.push_back(l);
    }
    REQUIRE(block.size() == golden.size());
    // The fixed part keeps its order; quantifier constants may come in any order.
    for (size_t i = 0; i < 12; ++i) CHECK(block[i] == golden[i]);
    std::vector<Tokens> a(block.begin() + 12, block.end()), b(golden.begin() + 12, golden.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("Becker preprocessing steps match the reference") {
  std::vector<Tokens> golden = annotated(readFile("tests/golden/becker_steps.p"));
  REQUIRE(golden.size() == 2);
  ContextScope scope;
  ModalRun run = proveModal(readFile("tests/problems/becker_S5.p"), 60);
  REQUIRE(run.result.status == SzsStatus::Theorem);
  std::map<std::string, Tokens> steps;
  for (const auto& [id, n] : run.result.nodes)
    if (n.app.rule == "defexp_and_simp_and_etaexpand" || n.app.rule == "miniscope")
      if (n.fromConjecture) steps[n.app.rule] = tokenize(printTerm(n.formula));
  // Formula tokens of the reference line: between "thf ( 5 , plain , (" and ") , inference".
  auto formulaOf = [](const Tokens& t) {
    auto end = std::find(t.begin(), t.end(), "inference");
    return Tokens(t.begin() + 7, end - 2);
  };
  CHECK(steps["defexp_and_simp_and_etaexpand"] == formulaOf(golden[0]));
  CHECK(steps["miniscope"] == formulaOf(golden[1]));
}

TEST_CASE("Becker status across encodings and systems") {
  std::string becker = readFile("tests/problems/becker_S5.p");
  EmbedOptions universal;
  universal.s5 = S5Mode::Universal;
  CHECK(status(becker, 60) == SzsStatus::Theorem);
  CHECK(status(becker, 60, universal) == SzsStatus::Theorem);
  CHECK(status(readFile("tests/problems/becker_K.p"), 30) != SzsStatus::Theorem);
}

TEST_CASE("frame conditions") {
  LogicSpec spec;
  auto of = [&](const std::string& s) {
    spec.system = s;
    return frameConditions(spec);
  };
  using V = std::vector<std::string>;
  CHECK(of("K") == V{});
  CHECK(of("D") == V{"mserial"});
  CHECK(of("T") == V{"mreflexive"});
  CHECK(of("B") == V{"mreflexive", "msymmetric"});
  CHECK(of("S4") == V{"mreflexive", "mtransitive"});
  CHECK(of("S5") == V{"mreflexive", "meuclidean"});
  CHECK_THROWS_AS(of("S6"), ModalError);
  spec.system.clear();
  spec.axiomSchemes = {"5", "K", "4"};
  CHECK(frameConditions(spec) == V{"mtransitive", "meuclidean"});
  CHECK_THROWS_AS(frameConditionDefinition("mdense"), ModalError);
}

TEST_CASE("quantifier constant mangling") {
  ContextScope scope;
  Type i = typeI(), o = typeO();
  CHECK(mangleType(i) == "_o__d_i_c_");
  CHECK(mangleType(funType(i, i)) == "_o__d_i_t__d_i_c_");
  CHECK(mangleType(funType(i, o)) == "_o__d_i_t__o_mworld_t__d_o_c__c_");
  CHECK(liftedTypeText(funType(funType(i, o), o)) == "( $i > mworld > $o ) > mworld > $o");
}

TEST_CASE("embedding output is classical") {
  const std::vector<std::string> problems = {
      readFile("tests/problems/becker_S5.p"),
      logicOf("K") + kProps + "thf(c,conjecture,( ( $box @ p ) => ( $dia @ ( p | ~ q ) ) )).\n",
      logicOf("S4", "local") + kProps + "thf(a,axiom,( $box @ p )).\nthf(c,conjecture,( p = q )).\n",
      logicOf("D") + "thf(f_t,type,f: $i > $o).\nthf(c,conjecture,( ? [X: $i] : ( $dia @ ( f @ X ) ) )).\n",
  };
  for (const std::string& text : problems) {
    std::string out = embedText(text);
    for (const std::string& t : tokenize(out)) {
      CHECK(t != "$box");
      CHECK(t != "$dia");
      CHECK(t != "$modal");
    }
    ContextScope scope;
    Problem p = parseProblem(out);
    CHECK_FALSE(p.logicSpec);
    CHECK_FALSE(p.usesModalOperators());
  }
}

TEST_CASE("modal axioms under their systems") {
  const std::string boxT = kProps + "thf(c,conjecture,( ( $box @ p ) => p )).\n";
  const std::string diaD = kProps + "thf(c,conjecture,( ( $box @ p ) => ( $dia @ p ) )).\n";
  const std::string four = kProps + "thf(c,conjecture,( ( $box @ p ) => ( $box @ ( $box @ p ) ) )).\n";
  const std::string five = kProps + "thf(c,conjecture,( ( $dia @ p ) => ( $box @ ( $dia @ p ) ) )).\n";
  CHECK(status(logicOf("T") + boxT, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("K") + boxT, 5) != SzsStatus::Theorem);
  CHECK(status(logicOf("D") + diaD, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("K") + diaD, 5) != SzsStatus::Theorem);
  CHECK(status(logicOf("S4") + four, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("T") + four, 5) != SzsStatus::Theorem);
  CHECK(status(logicOf("S5") + five, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("S4") + five, 5) != SzsStatus::Theorem);
  // Necessitation of a propositional tautology holds in K.
  CHECK(status(logicOf("K") + kProps + "thf(c,conjecture,( $box @ ( p | ~ p ) )).\n", 20) == SzsStatus::Theorem);
}

TEST_CASE("global and local consequence") {
  const std::string nec = kProps + "thf(a,axiom,p).\nthf(c,conjecture,( $box @ p )).\n";
  CHECK(status(logicOf("K") + nec, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("K", "local") + nec, 5) != SzsStatus::Theorem);
  const std::string refl = kProps + "thf(a,axiom,( $box @ p )).\nthf(c,conjecture,p).\n";
  CHECK(status(logicOf("T", "local") + refl, 20) == SzsStatus::Theorem);
  CHECK(status(logicOf("K", "local") + refl, 5) != SzsStatus::Theorem);
  std::string out = embedText(logicOf("K", "local") + refl);
  CHECK(out.find("thf(cw_type,type,( cw: mworld )).") != std::string::npos);
  CHECK(out.find("thf(c,conjecture,( p @ cw )).") != std::string::npos);
}

TEST_CASE("S5 encodings agree") {
  const std::vector<std::string> corpus = {
      kProps + "thf(c,conjecture,( ( $dia @ p ) => ( $box @ ( $dia @ p ) ) )).\n",
      kProps + "thf(c,conjecture,( ( $box @ p ) => p )).\n",
      kProps + "thf(c,conjecture,( ( $dia @ ( $box @ p ) ) => ( $box @ p ) )).\n",
      kProps + "thf(c,conjecture,( p => ( $box @ p ) )).\n",
  };
  EmbedOptions universal;
  universal.s5 = S5Mode::Universal;
  for (const std::string& body : corpus) {
    SzsStatus rel = status(logicOf("S5") + body, 10);
    SzsStatus uni = status(logicOf("S5") + body, 10, universal);
    if (rel == SzsStatus::Timeout || uni == SzsStatus::Timeout) {
      MESSAGE("timeout on one encoding: " << body);
      continue;
    }
    CHECK((rel == SzsStatus::Theorem) == (uni == SzsStatus::Theorem));
  }
}

TEST_CASE("embedding errors") {
  ContextScope scope;
  CHECK_THROWS_AS(embed(parseProblem(kProps + "thf(c,conjecture,( $box @ p )).\n")), ModalError);
  ContextScope scope2;
  CHECK_THROWS_AS(embed(parseProblem(logicOf("K") + "thf(mbox_t,type,mbox: $o).\nthf(c,conjecture,mbox).\n")),
                  ModalError);
}
