#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "ep/tptp.hpp"

namespace ep {

VarNamer::VarNamer(const std::vector<Term>& freeVars) {
  for (const Term& v : freeVars) nameOf(v.var());
}

std::string VarNamer::letter(size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

const std::string& VarNamer::nameOf(VarId v) {
  auto it = names_.find(v);
  if (it != names_.end()) return it->second;
  return names_.emplace(v, letter(names_.size())).first->second;
}

namespace {

bool plainWord(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quoteName(const std::string& s) {
  if (plainWord(s)) return s;
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string typeName(Type t) {
  if (t == typeI() || t == typeO() || t->name == "$tType") return t->name;
  return quoteName(t->name);
}

enum class Shape { Atom, Unary, Binder, Compound };

bool mentionsBelow(Term t, uint32_t k, uint32_t depth = 0) {
  if (t.looseBound() <= depth) return false;
  if (t.isBound()) return t.index() >= depth && t.index() < depth + k;
  if (t.isAbs()) return mentionsBelow(t.body(), k, depth + 1);
  if (t.isApp()) {
    if (mentionsBelow(t.head(), k, depth)) return true;
    for (const Term& a : t.args())
      if (mentionsBelow(a, k, depth)) return true;
  }
  return false;
}

// `a` is the eta-expansion of the bound variable `idx`.
bool isEtaBound(Term a, uint32_t idx) {
  uint32_t m = 0;
  while (a.isAbs()) {
    ++m;
    a = a.body();
  }
  Term h = a.head();
  auto args = a.args();
  if (!h.isBound() || h.index() != idx + m || args.size() != m) return false;
  for (uint32_t j = 0; j < m; ++j)
    if (!isEtaBound(args[j], m - 1 - j)) return false;
  return true;
}

// Eta-short form of an abstraction: its head and remaining arguments, to be
// read under `binders` extra bound variables.
struct Contracted {
  Term head;
  std::vector<Term> args;
  uint32_t binders = 0;
};

std::optional<Contracted> contract(Term t) {
  uint32_t k = 0;
  while (t.isAbs()) {
    ++k;
    t = t.body();
  }
  if (k == 0 || !t.isApp()) return std::nullopt;
  auto args = t.args();
  if (args.size() < k) return std::nullopt;
  size_t keep = args.size() - k;
  for (uint32_t j = 0; j < k; ++j)
    if (!isEtaBound(args[keep + j], k - 1 - j)) return std::nullopt;
  Term h = t.head();
  if (h.isConst() && ctx().symbol(h.symbol()).op != Logical::None) return std::nullopt;
  if (mentionsBelow(h, k)) return std::nullopt;
  for (size_t i = 0; i < keep; ++i)
    if (mentionsBelow(args[i], k)) return std::nullopt;
  return Contracted{t.head(), std::vector<Term>(args.begin(), args.begin() + keep), k};
}

class Printer {
 public:
  explicit Printer(VarNamer& namer) : namer_(namer), base_(namer.count()) {}

  std::string bare(Term t);
  std::string unit(Term t) {
    Shape s = shape(t);
    if (s == Shape::Compound) return "( " + bare(t) + " )";
    return bare(t);
  }
  std::string eqOperand(Term t) {
    if (shape(t) == Shape::Binder) return "( " + bare(t) + " )";
    return unit(t);
  }

 private:
  static Shape shape(Term t) {
    if (t.isAtom()) return Shape::Atom;
    if (t.isAbs()) {
      auto c = contract(t);
      if (!c) return Shape::Binder;
      return c->args.empty() ? Shape::Atom : Shape::Compound;
    }
    Term h = t.head();
    if (!h.isConst()) return Shape::Compound;
    const Symbol& sym = ctx().symbol(h.symbol());
    auto args = t.args();
    if (sym.op == Logical::Not && args.size() == 1) {
      if (isEquation(args[0])) return Shape::Compound;
      return Shape::Unary;
    }
    if ((sym.op == Logical::Forall || sym.op == Logical::Exists) && args.size() == 1 && args[0].isAbs())
      return Shape::Binder;
    return Shape::Compound;
  }
  static bool isEquation(Term t) {
    return t.isApp() && t.head().isConst() && ctx().symbol(t.head().symbol()).op == Logical::Eq && t.args().size() == 2;
  }

  std::string atom(Term t);
  std::string binder(const std::string& q, Term t, Logical op);
  std::string boundName(uint32_t level) { return VarNamer::letter(base_ + level); }

  VarNamer& namer_;
  size_t base_;
  std::vector<std::string> env_;
};

std::string Printer::atom(Term t) {
  if (t.isFree()) return namer_.nameOf(t.var());
  if (t.isBound()) {
    if (t.index() >= env_.size()) throw std::invalid_argument("cannot print a term with loose bound variables");
    return env_[env_.size() - 1 - t.index()];
  }
  const Symbol& s = ctx().symbol(t.symbol());
  switch (s.op) {
    case Logical::True: return "$true";
    case Logical::False: return "$false";
    case Logical::Box: return "$box";
    case Logical::Dia: return "$dia";
    case Logical::Forall: return "!!";
    case Logical::Exists: return "??";
    case Logical::None: return quoteName(s.name);
    default: return "(" + s.name + ")";
  }
}

std::string Printer::binder(const std::string& q, Term t, Logical op) {
  std::string vars;
  Term cur = t;
  size_t pushed = 0;
  for (;;) {
    Term abs;
    if (op == Logical::None) {
      if (!cur.isAbs() || (pushed > 0 && contract(cur))) break;
      abs = cur;
    } else {
      if (!(cur.isApp() && cur.head().isConst() && ctx().symbol(cur.head().symbol()).op == op &&
            cur.args().size() == 1 && cur.args()[0].isAbs()))
        break;
      abs = cur.args()[0];
    }
    auto named = std::count_if(env_.begin(), env_.end(), [](const std::string& e) { return !e.empty(); });
    std::string n = boundName(static_cast<uint32_t>(named));
    if (!vars.empty()) vars += ",";
    vars += n + ": " + printType(abs.binderType());
    env_.push_back(n);
    ++pushed;
    cur = abs.body();
  }
  std::string out = q + " [" + vars + "] : " + unit(cur);
  env_.resize(env_.size() - pushed);
  return out;
}

std::string Printer::bare(Term t) {
  if (t.isAtom()) return atom(t);
  if (t.isAbs()) {
    auto c = contract(t);
    if (!c) return binder("^", t, Logical::None);
    env_.resize(env_.size() + c->binders, "");
    std::string out = atom(c->head);
    for (const Term& a : c->args) out += " @ " + unit(a);
    env_.resize(env_.size() - c->binders);
    return out;
  }
  Term h = t.head();
  auto args = t.args();
  if (h.isConst()) {
    Logical op = ctx().symbol(h.symbol()).op;
    if (op == Logical::Not && args.size() == 1) {
      if (isEquation(args[0])) return eqOperand(args[0].args()[0]) + " != " + eqOperand(args[0].args()[1]);
      return "~ " + unit(args[0]);
    }
    if ((op == Logical::Or || op == Logical::And) && args.size() == 2) {
      std::string sep = op == Logical::Or ? " | " : " & ";
      Term l = args[0];
      bool chain = l.isApp() && l.head() == h && l.args().size() == 2;
      return (chain ? bare(l) : unit(l)) + sep + unit(args[1]);
    }
    if (op == Logical::Implies && args.size() == 2) return unit(args[0]) + " => " + unit(args[1]);
    if (op == Logical::Equiv && args.size() == 2) return unit(args[0]) + " <=> " + unit(args[1]);
    if (op == Logical::Eq && args.size() == 2) return eqOperand(args[0]) + " = " + eqOperand(args[1]);
    if ((op == Logical::Forall || op == Logical::Exists) && args.size() == 1 && args[0].isAbs())
      return binder(op == Logical::Forall ? "!" : "?", t, op);
  }
  std::string out = h.isAbs() ? "( " + bare(h) + " )" : atom(h);
  for (const Term& a : args) out += " @ " + unit(a);
  return out;
}

std::string literalText(Printer& p, const Literal& l, bool alone) {
  if (l.isFormula()) {
    if (l.positive()) return alone ? p.bare(l.lhs) : p.unit(l.lhs);
    return "~ " + p.unit(l.lhs);
  }
  std::string s = p.eqOperand(l.lhs) + (l.positive() ? " = " : " != ") + p.eqOperand(l.rhs);
  return alone ? s : "( " + s + " )";
}

}  // namespace

std::string printType(Type t) {
  if (t->isBase()) return typeName(t);
  std::string a = t->arg->isFun() ? "( " + printType(t->arg) + " )" : typeName(t->arg);
  return a + " > " + printType(t->res);
}

std::string printTerm(Term t, VarNamer& namer) {
  for (const Term& v : freeVars(t)) namer.nameOf(v.var());
  Printer p(namer);
  return p.bare(t);
}

std::string printTerm(Term t) {
  VarNamer namer;
  return printTerm(t, namer);
}

std::string printClause(const Clause& c, VarNamer& namer) {
  std::vector<Term> fvs = freeVars(c);
  for (const Term& v : fvs) namer.nameOf(v.var());
  Printer p(namer);
  if (c.literals.empty()) return "$false";
  std::string body;
  bool alone = c.literals.size() == 1 && fvs.empty();
  for (const Literal& l : c.literals) {
    if (!body.empty()) body += " | ";
    body += literalText(p, l, alone);
  }
  if (fvs.empty()) return body;
  std::string vars;
  for (const Term& v : fvs) {
    if (!vars.empty()) vars += ",";
    vars += namer.nameOf(v.var()) + ": " + printType(v.type());
  }
  if (c.literals.size() == 1) return "! [" + vars + "] : " + body;
  return "! [" + vars + "] : ( " + body + " )";
}

std::string printClause(const Clause& c) {
  VarNamer namer;
  return printClause(c, namer);
}

std::string printAnnotated(const AnnotatedFormula& f) {
  std::string head = "thf(" + quoteName(f.name) + "," + roleName(f.role) + ",";
  if (f.role == Role::Type) {
    std::string ty = f.declaredType ? printType(f.declaredType) : "$tType";
    return head + "( " + quoteName(f.declaredName) + ": " + ty + " )).";
  }
  return head + "( " + printTerm(f.formula) + " )).";
}

std::string printProblem(const Problem& p) {
  std::string out;
  if (p.logicSpec) {
    const LogicSpec& s = *p.logicSpec;
    std::string mods;
    if (!s.system.empty()) {
      mods = "$modal_system_" + s.system;
    } else {
      for (const auto& a : s.axiomSchemes) mods += (mods.empty() ? "" : ", ") + ("$modal_axiom_" + a);
      mods = "[ " + mods + " ]";
    }
    out += "thf(logic_spec,logic,( $modal := [ $constants := $" + s.constants + ", $quantification := $" +
           s.quantification + ", $consequence := $" +
           (s.consequence == Consequence::Global ? "global" : "local") + ", $modalities := " + mods + " ] )).\n";
  }
  for (const auto& f : p.formulas) out += printAnnotated(f) + "\n";
  return out;
}

std::string szsName(SzsStatus s) {
  switch (s) {
    case SzsStatus::Theorem: return "Theorem";
    case SzsStatus::ContradictoryAxioms: return "ContradictoryAxioms";
    case SzsStatus::CounterSatisfiable: return "CounterSatisfiable";
    case SzsStatus::GaveUp: return "GaveUp";
    case SzsStatus::Timeout: return "Timeout";
    case SzsStatus::Unsatisfiable: return "Unsatisfiable";
    case SzsStatus::Satisfiable: return "Satisfiable";
    case SzsStatus::Error: return "Error";
  }
  return "Error";
}

std::string printSzs(SzsStatus s, const std::string& problemName) {
  return "% SZS status " + szsName(s) + " for " + problemName;
}

const std::vector<std::string>& proofRuleVocabulary() {
  static const std::vector<std::string> rules = {
      "neg_conjecture", "defexp_and_simp_and_etaexpand", "miniscope", "cnf", "func_ext", "bool_ext",
      "paramod_ordered", "eqfactor_ordered", "pre_uni", "pattern_uni", "rewrite", "simp", "prim_subst", "inj",
      "instantiate"};
  return rules;
}

std::string printProof(const std::vector<std::string>& typeLines, const std::vector<ProofLine>& lines,
                       const std::string& problemName) {
  if (lines.empty() || !lines.back().isFalse) throw std::invalid_argument("derivation does not end in $false");
  const auto& vocab = proofRuleVocabulary();
  std::set<std::string> seen;
  std::string out = "% SZS output start CNFRefutation for " + problemName + "\n";
  for (const auto& t : typeLines) out += t + "\n";
  for (const ProofLine& l : lines) {
    if (!seen.insert(l.name).second) throw std::invalid_argument("duplicate proof line '" + l.name + "'");
    out += "thf(" + quoteName(l.name) + "," + l.role + ",( " + l.formula + " )";
    if (l.inference) {
      const InferenceRecord& r = *l.inference;
      if (std::find(vocab.begin(), vocab.end(), r.rule) == vocab.end())
        throw std::invalid_argument("unknown rule name '" + r.rule + "'");
      std::string parents;
      for (size_t i = 0; i < r.parents.size(); ++i) {
        const std::string& p = r.parents[i];
        if (!seen.count(p) || p == l.name) throw std::invalid_argument("dangling parent reference '" + p + "'");
        if (i > 0) parents += ",";
        parents += quoteName(p);
        if (i == 0 && !r.bindings.empty()) {
          parents += ":[";
          for (size_t k = 0; k < r.bindings.size(); ++k) {
            if (k > 0) parents += ",";
            parents += "bind(" + r.bindings[k].first + ",$thf(" + r.bindings[k].second + "))";
          }
          parents += "]";
        }
      }
      out += ",inference(" + r.rule + ",[status(" + r.status + ")],[" + parents + "])";
    } else if (!l.sourceFile.empty()) {
      out += ",file('" + l.sourceFile + "'," + quoteName(l.sourceName) + ")";
    }
    out += ").\n";
  }
  out += "% SZS output end CNFRefutation for " + problemName + "\n";
  return out;
}

}  // namespace ep
