#include "ep/saturation.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>
#include <unordered_set>

namespace ep {

namespace {

using Clock = std::chrono::steady_clock;

bool onlyO(Type t) { return t->isBase() ? t == typeO() : onlyO(t->arg) && onlyO(t->res); }

bool propositionalSymbol(SymbolId s) {
  const Symbol& sym = ctx().symbol(s);
  return sym.kind == SymbolKind::Logical || onlyO(sym.type);
}

bool propositional(const Clause& c) {
  for (const Literal& l : c.literals) {
    for (Term t : {l.lhs, l.rhs}) {
      for (SymbolId s : symbolsOf(t))
        if (!propositionalSymbol(s)) return false;
      for (const Term& v : freeVars(t))
        if (v.type() != typeO()) return false;
    }
  }
  return true;
}

bool finiteType(Type t) { return t == typeO() || t == funType(typeO(), typeO()); }

class Prover {
 public:
  Prover(const ProverConfig& cfg) : cfg_(cfg), start_(Clock::now()) {
    ucfg_.depthBudget = cfg.unifDepth;
    ucfg_.flexFlexRule = cfg.flexFlexRule;
  }

  void preprocess(const Problem& p) {
    Definitions defs = collectDefinitions(p);
    hasConjecture_ = p.conjectureCount() > 0;
    for (Type t : ctx().baseTypes())
      if (t != typeO()) heads_.types.push_back(t);
    for (const AnnotatedFormula& f : p.formulas) {
      if (f.role == Role::Type) continue;
      if (f.role == Role::Definition && isDefinitionFormula(f.formula)) continue;
      uint64_t cur;
      if (f.role == Role::Conjecture) {
        uint64_t c = addFormula(roleName(f.role), f.formula, {}, f.name);
        RuleApplication neg;
        neg.rule = "neg_conjecture";
        neg.status = "cth";
        neg.premises = {c};
        cur = addFormula("negated_conjecture", normalize(mkNot(f.formula)), neg, "");
        result_.nodes[cur].fromConjecture = true;
      } else {
        std::string role = f.role == Role::Definition ? "axiom" : roleName(f.role);
        cur = addFormula(role, f.formula, {}, f.name);
      }
      Term formula = result_.nodes[cur].formula;
      Term expanded = preprocessFormula(formula, defs, cfg_.preprocess);
      if (expanded != formula) cur = addFormula("plain", expanded, step("defexp_and_simp_and_etaexpand", cur), "");
      if (cfg_.preprocess.miniscope) {
        Term m = miniscope(expanded);
        if (m != expanded) cur = addFormula("plain", m, step("miniscope", cur), "");
      }
      clausify(Clause({Literal::formula(result_.nodes[cur].formula, Polarity::Positive)}), cur, true);
    }
  }

  void addInputClauses(const std::vector<Clause>& cs) {
    for (const Clause& c : cs) {
      DerivationNode n;
      n.role = "axiom";
      uint64_t id = addClauseNode(c, RuleApplication{}, std::move(n));
      finalize(id);
    }
  }

  ProverResult run() {
    std::vector<uint64_t> inputs(unprocessedByAge_.begin(), unprocessedByAge_.end());
    propositional_ = true;
    for (uint64_t id : inputs) propositional_ = propositional_ && propositional(clause(id));
    uint64_t picks = 0;
    bool timedOut = false;
    while (!emptyId_) {
      if (unprocessedByAge_.empty()) break;
      if (expired()) {
        timedOut = true;
        break;
      }
      if (cfg_.maxIterations && result_.stats.iterations >= cfg_.maxIterations) {
        incomplete_ = true;
        break;
      }
      ++result_.stats.iterations;
      bool byAge = cfg_.weightPicksPerAgePick == 0 || picks % (cfg_.weightPicksPerAgePick + 1) == cfg_.weightPicksPerAgePick;
      ++picks;
      uint64_t gid = byAge ? *unprocessedByAge_.begin() : unprocessedByWeight_.begin()->second;
      removeUnprocessed(gid);
      select(gid);
    }
    if (emptyId_) {
      result_.proof = extractProof(result_.nodes, *emptyId_);
      result_.status = classifyRefutation(result_.nodes, *emptyId_, hasConjecture_);
    } else if (timedOut) {
      result_.status = SzsStatus::Timeout;
    } else if (propositional_ && !incomplete_) {
      result_.status = hasConjecture_ ? SzsStatus::CounterSatisfiable : SzsStatus::Satisfiable;
    } else {
      result_.status = SzsStatus::GaveUp;
    }
    return std::move(result_);
  }

  static Term preprocessFormula(Term f, const Definitions& defs, const PreprocessConfig& pre) {
    Term t = pre.expandDefinitions ? expandDefinitions(f, defs) : f;
    if (pre.replaceDefinedEq) t = replaceDefinedEqualities(t);
    return normalize(simplifyFormula(normalize(t)));
  }

 private:
  // -------------------------------------------------------------------------
  // Node bookkeeping

  static RuleApplication step(const std::string& rule, uint64_t premise) {
    RuleApplication a;
    a.rule = rule;
    a.premises = {premise};
    return a;
  }

  bool ancestryFromConjecture(const RuleApplication& app) const {
    for (uint64_t p : app.premises) {
      auto it = result_.nodes.find(p);
      if (it != result_.nodes.end() && it->second.fromConjecture) return true;
    }
    return false;
  }

  uint64_t addFormula(const std::string& role, Term f, RuleApplication app, const std::string& source) {
    DerivationNode n;
    n.id = nextId_++;
    n.role = role;
    n.formula = f;
    n.sourceName = source;
    n.fromConjecture = ancestryFromConjecture(app);
    n.app = std::move(app);
    uint64_t id = n.id;
    result_.nodes.emplace(id, std::move(n));
    return id;
  }

  uint64_t addClauseNode(Clause c, RuleApplication app, DerivationNode n = {}) {
    c.id = nextId_++;
    c.age = static_cast<uint32_t>(c.id);
    n.id = c.id;
    n.isClause = true;
    n.fromConjecture = n.fromConjecture || ancestryFromConjecture(app);
    app.produced = c;
    n.clause = std::move(c);
    n.app = std::move(app);
    uint64_t id = n.id;
    result_.nodes.emplace(id, std::move(n));
    ++result_.stats.generated;
    return id;
  }

  const Clause& clause(uint64_t id) const { return result_.nodes.at(id).clause; }

  bool expired() const {
    return std::chrono::duration<double>(Clock::now() - start_).count() >= cfg_.timeLimit;
  }

  // -------------------------------------------------------------------------
  // Insertion path

  void clausify(const Clause& c, uint64_t premise, bool input) {
    size_t before = ctx().symbolCount();
    std::vector<Clause> cs = normalize(c, cfg_.preprocess);
    RuleApplication app = step("cnf", premise);
    app.status = "esa";
    for (size_t s = before; s < ctx().symbolCount(); ++s) app.introduced.push_back(static_cast<SymbolId>(s));
    for (Clause& out : cs) {
      uint64_t id = addClauseNode(std::move(out), app);
      if (input && cfg_.preprocess.replaceDefinedEq) {
        Clause r = replaceDefinedEqualities(clause(id));
        if (!isRenaming(r, clause(id))) {
          uint64_t rid = addClauseNode(std::move(r), step("simp", id));
          if (!isNormalClause(clause(rid))) {
            clausify(clause(rid), rid, false);
            continue;
          }
          id = rid;
        }
      }
      finalize(id);
    }
  }

  // Generated clause: eager unification of fresh constraints first.
  void process(RuleApplication app) {
    if (emptyId_) return;
    uint32_t constraints = app.constraints;
    uint64_t id = addClauseNode(app.produced, app);
    if (constraints == 0) {
      finalize(id);
      return;
    }
    const Clause& c = clause(id);
    std::vector<uint32_t> idx;
    for (uint32_t k = static_cast<uint32_t>(c.size()) - constraints; k < c.size(); ++k) idx.push_back(k);
    bool unsolvable = false, bound = false;
    std::vector<RuleApplication> us =
        unifyConstraints(c, idx, ucfg_, cfg_.unifiersPerInference, &unsolvable, &bound);
    if (bound || us.size() >= cfg_.unifiersPerInference) incomplete_ = true;
    if (us.empty()) {
      // Unsolved constraints stay in the search space unless provably unsolvable.
      if (!unsolvable) finalize(id);
      return;
    }
    for (RuleApplication& u : us) {
      u.premises = {id};
      uint64_t uid = addClauseNode(u.produced, u);
      finalize(uid);
      if (emptyId_) return;
    }
  }

  void finalize(uint64_t id) {
    if (emptyId_) return;
    SimplifyResult s = simplify(clause(id), {});
    if (s.tautology) return;
    if (s.changed) id = addClauseNode(*s.clause, step("simp", id));
    if (!isNormalClause(clause(id))) {
      clausify(clause(id), id, false);
      return;
    }
    enqueue(id);
  }

  void enqueue(uint64_t id) {
    const Clause& c = clause(id);
    if (isEmptyClause(c)) {
      emptyId_ = id;
      return;
    }
    // Variants up to variable naming are dropped outright.
    if (!seen_.insert(printClause(c)).second) return;
    for (uint64_t p : processed_)
      if (redundant(clause(p), c)) return;
    unprocessedByWeight_.insert({clauseWeight(c), id});
    unprocessedByAge_.insert(id);
  }

  static bool redundant(const Clause& by, const Clause& c) {
    return isRenaming(by, c) || subsumes(by, c);
  }

  void removeUnprocessed(uint64_t id) {
    unprocessedByWeight_.erase({clauseWeight(clause(id)), id});
    unprocessedByAge_.erase(id);
  }

  // -------------------------------------------------------------------------
  // Given clause

  void select(uint64_t gid) {
    std::vector<Clause> units;
    for (uint64_t p : processed_)
      if (clause(p).size() == 1) units.push_back(clause(p));
    SimplifyResult s = simplify(clause(gid), units);
    if (s.tautology) return;
    if (s.changed) {
      RuleApplication app;
      app.rule = s.unitsUsed.empty() ? "simp" : "rewrite";
      app.premises = {gid};
      for (uint64_t u : s.unitsUsed) app.premises.push_back(u);
      uint64_t nid = addClauseNode(*s.clause, app);
      if (!isNormalClause(clause(nid))) {
        clausify(clause(nid), nid, false);
        return;
      }
      if (isEmptyClause(clause(nid))) {
        emptyId_ = nid;
        return;
      }
      gid = nid;
    }
    const Clause& g = clause(gid);
    for (uint64_t p : processed_)
      if (redundant(clause(p), g)) return;
    // Replaced by its instances, so it must not subsume them.
    if (propositional_ && !isGround(g)) {
      ++result_.stats.processed;
      generate(gid);
      return;
    }
    std::vector<uint64_t> kept;
    for (uint64_t p : processed_)
      if (!redundant(g, clause(p))) kept.push_back(p);
    processed_ = std::move(kept);
    processed_.push_back(gid);
    ++result_.stats.processed;
    generate(gid);
  }

  void generate(uint64_t gid) {
    const Clause g = clause(gid);
    // Propositional clauses with variables are only instantiated, keeping the
    // ground term set finite.
    if (propositional_ && !isGround(g)) {
      Term x = freeVars(g).front();
      for (RuleApplication& a : exhaustiveInstantiate(g, x.var(), x.type())) process(std::move(a));
      return;
    }
    std::vector<uint64_t> partners = processed_;
    for (uint64_t pid : partners) {
      if (emptyId_ || expired()) return;
      const Clause p = clause(pid);
      if (propositional_ && !isGround(p)) continue;
      for (RuleApplication& a : paraInferences(g, p)) process(std::move(a));
      if (pid != gid)
        for (RuleApplication& a : paraInferences(p, g)) process(std::move(a));
    }
    for (RuleApplication& a : eqfacInferences(g)) process(std::move(a));
    for (uint32_t k = 0; k < g.size() && !emptyId_; ++k) {
      const Literal& l = g.literals[k];
      if (l.isFormula() && l.lhs.isFlex() && !propositional_) {
        if (g.psDepth < cfg_.psLimit) {
          for (RuleApplication& a : primSubst(g, k, heads_)) process(std::move(a));
        } else {
          incomplete_ = true;
        }
      }
      if (l.type() == typeO() && !l.isFormula())
        for (RuleApplication& a : boolExt(g, k)) process(std::move(a));
      if (l.type()->isFun()) process(funcExt(g, k));
      if (l.negative() && !l.isFormula() && !isFlexFlex(l) && (l.lhs.hasFreeVars() || l.rhs.hasFreeVars())) {
        bool bound = false;
        for (RuleApplication& a : unifyConstraints(g, {k}, ucfg_, cfg_.unifiersPerInference, nullptr, &bound))
          process(std::move(a));
        if (bound) incomplete_ = true;
      }
    }
    if (cfg_.inj)
      if (auto a = injRule(g, inverted_)) process(std::move(*a));
    std::set<VarId> done;
    for (const Literal& l : g.literals) {
      Term h = l.lhs;
      while (h.isAbs()) h = h.body();
      h = h.head();
      if (!h.isFree() || !finiteType(h.type()) || !done.insert(h.var()).second) continue;
      for (RuleApplication& a : exhaustiveInstantiate(g, h.var(), h.type())) process(std::move(a));
    }
  }

  ProverConfig cfg_;
  UnifConfig ucfg_;
  Clock::time_point start_;
  ProverResult result_;
  uint64_t nextId_ = 1;
  std::optional<uint64_t> emptyId_;
  std::set<std::pair<uint32_t, uint64_t>> unprocessedByWeight_;
  std::set<uint64_t> unprocessedByAge_;
  std::vector<uint64_t> processed_;
  std::set<SymbolId> inverted_;
  std::unordered_set<std::string> seen_;
  PrimSubstHeads heads_;
  bool hasConjecture_ = false;
  bool propositional_ = false;
  bool incomplete_ = false;
};

}  // namespace

ProverResult prove(const Problem& problem, const ProverConfig& config) {
  Prover p(config);
  p.preprocess(problem);
  ProverResult r = p.run();
  if (!r.proof.empty()) {
    r.checkFailure = checkProof(r, problem, config.preprocess);
    r.proofChecked = r.checkFailure.empty();
    if (!r.proofChecked) r.status = SzsStatus::GaveUp;
  }
  return r;
}

ProverResult saturate(const std::vector<Clause>& clauses, const ProverConfig& config) {
  Prover p(config);
  p.addInputClauses(clauses);
  ProverResult r = p.run();
  if (!r.proof.empty()) {
    r.checkFailure = checkProof(r, Problem{}, config.preprocess);
    r.proofChecked = r.checkFailure.empty();
    if (!r.proofChecked) r.status = SzsStatus::GaveUp;
  }
  return r;
}

std::vector<uint64_t> extractProof(const std::map<uint64_t, DerivationNode>& nodes, uint64_t emptyId) {
  std::set<uint64_t> seen;
  std::vector<uint64_t> stack = {emptyId};
  while (!stack.empty()) {
    uint64_t id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    for (uint64_t p : nodes.at(id).app.premises) stack.push_back(p);
  }
  return {seen.begin(), seen.end()};
}

SzsStatus classifyRefutation(const std::map<uint64_t, DerivationNode>& nodes, uint64_t emptyId,
                             bool hasConjecture) {
  if (!hasConjecture) return SzsStatus::Unsatisfiable;
  return nodes.at(emptyId).fromConjecture ? SzsStatus::Theorem : SzsStatus::ContradictoryAxioms;
}

std::string checkProof(const ProverResult& result, const Problem& problem, const PreprocessConfig& pre) {
  Definitions defs = problem.formulas.empty() ? Definitions{} : collectDefinitions(problem);
  const auto& vocab = proofRuleVocabulary();
  auto asClause = [&](const DerivationNode& n) {
    return n.isClause ? n.clause : Clause({Literal::formula(n.formula, Polarity::Positive)});
  };
  for (uint64_t id : result.proof) {
    const DerivationNode& n = result.nodes.at(id);
    const std::string& rule = n.app.rule;
    std::string where = "step " + std::to_string(id) + " (" + rule + ")";
    if (rule.empty()) {
      if (!n.app.premises.empty()) return where + ": input with premises";
      continue;
    }
    if (std::find(vocab.begin(), vocab.end(), rule) == vocab.end()) return where + ": unknown rule";
    std::vector<const DerivationNode*> ps;
    for (uint64_t p : n.app.premises) {
      auto it = result.nodes.find(p);
      if (it == result.nodes.end() || p >= id) return where + ": bad premise";
      ps.push_back(&it->second);
    }
    if (ps.empty()) return where + ": no premises";
    bool ok;
    if (rule == "neg_conjecture") {
      ok = n.formula == normalize(mkNot(ps[0]->formula));
    } else if (rule == "defexp_and_simp_and_etaexpand") {
      ok = n.formula == Prover::preprocessFormula(ps[0]->formula, defs, pre);
    } else if (rule == "miniscope") {
      ok = n.formula == miniscope(ps[0]->formula);
    } else {
      std::vector<Clause> premises;
      for (const DerivationNode* p : ps) premises.push_back(asClause(*p));
      RuleApplication app = n.app;
      app.produced = n.clause;
      ok = replayMatches(app, premises, pre);
    }
    if (!ok) return where + ": replay mismatch";
  }
  return "";
}

namespace {

void collectSymbols(Term t, std::set<SymbolId>& out) {
  for (SymbolId s : symbolsOf(t)) out.insert(s);
}

std::string typeLine(SymbolId s) {
  const Symbol& sym = ctx().symbol(s);
  return "thf(" + sym.name + "_type,type,( " + sym.name + ": " + printType(sym.type) + " )).";
}

}  // namespace

std::string renderProof(const ProverResult& result, const Problem& problem) {
  std::set<SymbolId> used;
  for (uint64_t id : result.proof) {
    const DerivationNode& n = result.nodes.at(id);
    if (n.isClause) {
      for (const Literal& l : n.clause.literals) {
        collectSymbols(l.lhs, used);
        collectSymbols(l.rhs, used);
      }
    } else {
      collectSymbols(n.formula, used);
    }
    for (const auto& [v, t] : n.app.bindings.bindings()) collectSymbols(t, used);
  }
  // Definitions pull in the symbols of their bodies.
  std::map<SymbolId, Term> defs;
  for (const AnnotatedFormula& f : problem.formulas)
    if (f.role == Role::Definition && isDefinitionFormula(f.formula)) {
      Term lhs = f.formula.args()[0];
      defs[lhs.symbol()] = f.formula;
    }
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [s, f] : defs)
      if (used.count(s)) {
        size_t before = used.size();
        collectSymbols(f, used);
        grew = grew || used.size() != before;
      }
  }
  std::vector<std::string> header;
  std::set<SymbolId> declared;
  for (const AnnotatedFormula& f : problem.formulas) {
    if (f.role == Role::Type) {
      auto s = ctx().lookup(f.declaredName);
      if (!f.declaredType || (s && used.count(*s))) {
        header.push_back(printAnnotated(f));
        if (s) declared.insert(*s);
      }
    } else if (f.role == Role::Definition && isDefinitionFormula(f.formula)) {
      if (used.count(f.formula.args()[0].symbol())) header.push_back(printAnnotated(f));
    }
  }
  for (SymbolId s : used) {
    const Symbol& sym = ctx().symbol(s);
    if (sym.kind == SymbolKind::Logical || declared.count(s)) continue;
    header.push_back(typeLine(s));
  }
  std::vector<ProofLine> lines;
  for (uint64_t id : result.proof) {
    const DerivationNode& n = result.nodes.at(id);
    ProofLine line;
    line.name = std::to_string(id);
    line.role = n.role;
    if (n.isClause && isEmptyClause(n.clause)) {
      line.formula = "$false";
      line.isFalse = true;
    } else {
      line.formula = n.isClause ? printClause(n.clause) : printTerm(n.formula);
    }
    if (n.app.rule.empty()) {
      line.sourceFile = problem.name.empty() ? "unknown" : problem.name;
      for (const AnnotatedFormula& f : problem.formulas)
        if (f.name == n.sourceName && !f.sourceFile.empty())
          line.sourceFile = std::filesystem::path(f.sourceFile).filename().string();
      line.sourceName = n.sourceName.empty() ? line.name : n.sourceName;
    } else {
      InferenceRecord rec;
      rec.rule = n.app.rule;
      rec.status = n.app.status;
      for (uint64_t p : n.app.premises) rec.parents.push_back(std::to_string(p));
      if (!n.app.bindings.empty() && !n.app.premises.empty()) {
        const DerivationNode& parent = result.nodes.at(n.app.premises[0]);
        VarNamer namer(parent.isClause ? freeVars(parent.clause) : std::vector<Term>{});
        for (const auto& [v, t] : n.app.bindings.bindings()) {
          std::string name = namer.nameOf(v);
          rec.bindings.push_back({name, printTerm(t, namer)});
        }
      }
      line.inference = rec;
    }
    lines.push_back(std::move(line));
  }
  return printProof(header, lines, problem.name.empty() ? "unknown" : problem.name);
}

}  // namespace ep
