#include "ep/modal.hpp"

#include <algorithm>
#include <set>

#include "ep/cnf.hpp"

namespace ep {

namespace {

const std::vector<std::string> kProperties = {"mserial", "mreflexive", "msymmetric", "mtransitive", "meuclidean"};

const std::set<std::string> kReserved = {"mworld", "mrel", "cw", "mvalid", "mtrue", "mfalse", "mnot",
                                         "mor", "mand", "mimplies", "mequiv", "mbox", "mdia"};

std::string typeLine(const std::string& name, const std::string& type) {
  return "thf(" + name + "_type,type,( " + name + ": " + type + " )).";
}

std::string defLine(const std::string& name, const std::string& body) {
  return "thf(" + name + "_def,definition,( " + name + " = ( " + body + " ) )).";
}

std::string parenthesized(Type t) {
  if (t == typeO() || t->isFun()) return "( " + liftedTypeText(t) + " )";
  return liftedTypeText(t);
}

std::string compact(Type t);

std::string compactArg(Type t) {
  if (t == typeO() || t->isFun()) return "(" + compact(t) + ")";
  return t->name;
}

std::string compact(Type t) {
  if (t == typeO()) return "mworld>$o";
  if (t->isBase()) return t->name;
  return compactArg(t->arg) + ">" + compactArg(t->res);
}

struct Connective {
  const char* name;
  const char* type;
  const char* body;
};

const std::vector<Connective> kConnectives = {
    {"mtrue", "mworld > $o", "^ [A: mworld] : $true"},
    {"mfalse", "mworld > $o", "^ [A: mworld] : $false"},
    {"mnot", "( mworld > $o ) > mworld > $o", "^ [A: mworld > $o,B: mworld] : ~ ( A @ B )"},
    {"mor", "( mworld > $o ) > ( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld > $o,C: mworld] : ( ( A @ C ) | ( B @ C ) )"},
    {"mand", "( mworld > $o ) > ( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld > $o,C: mworld] : ( ( A @ C ) & ( B @ C ) )"},
    {"mimplies", "( mworld > $o ) > ( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld > $o,C: mworld] : ( ( A @ C ) => ( B @ C ) )"},
    {"mequiv", "( mworld > $o ) > ( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld > $o,C: mworld] : ( ( A @ C ) <=> ( B @ C ) )"},
    {"mdia", "( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld] : ? [C: mworld] : ( ( mrel @ B @ C ) & ( A @ C ) )"},
    {"mbox", "( mworld > $o ) > mworld > $o",
     "^ [A: mworld > $o,B: mworld] : ! [C: mworld] : ( ( mrel @ B @ C ) => ( A @ C ) )"},
};

const char* connectiveName(Logical op) {
  switch (op) {
    case Logical::True: return "mtrue";
    case Logical::False: return "mfalse";
    case Logical::Not: return "mnot";
    case Logical::Or: return "mor";
    case Logical::And: return "mand";
    case Logical::Implies: return "mimplies";
    case Logical::Equiv: return "mequiv";
    case Logical::Box: return "mbox";
    case Logical::Dia: return "mdia";
    default: return nullptr;
  }
}

std::string quantifierName(bool forall, Type t) {
  return std::string(forall ? "mforall_const_" : "mexists_const_") + mangleType(t);
}

// Prints the lifted form of a term and records the generated symbols it uses.
class Lifter {
 public:
  std::set<std::string> connectives;
  std::vector<std::pair<bool, Type>> quantifiers;

  std::string lift(Term t) {
    if (t.isBound()) return env_[env_.size() - 1 - t.index()];
    if (t.isFree()) throw ModalError("open formula in modal problem");
    if (t.isConst()) return constant(t);
    if (t.isAbs()) {
      std::string n = fresh();
      env_.push_back(n);
      std::string out = "( ^ [" + n + ": " + liftedTypeText(t.binderType()) + "] : " + lift(t.body()) + " )";
      env_.pop_back();
      return out;
    }
    Term h = t.head();
    auto args = t.args();
    if (h.isConst() && ctx().symbol(h.symbol()).op == Logical::Eq) {
      if (args.size() != 2) throw ModalError("partially applied equality in modal problem");
      return "( ^ [" + fresh() + ": mworld] : ( " + lift(args[0]) + " = " + lift(args[1]) + " ) )";
    }
    std::string out = "( " + lift(h);
    for (const Term& a : args) out += " @ " + lift(a);
    return out + " )";
  }

 private:
  std::string constant(Term t) {
    const Symbol& s = ctx().symbol(t.symbol());
    if (s.op == Logical::None) {
      if (kReserved.count(s.name) || s.name.rfind("mforall_const_", 0) == 0 || s.name.rfind("mexists_const_", 0) == 0)
        throw ModalError("symbol name '" + s.name + "' is reserved by the modal embedding");
      return printTerm(t);
    }
    if (s.op == Logical::Forall || s.op == Logical::Exists) {
      bool forall = s.op == Logical::Forall;
      std::pair<bool, Type> q{forall, s.param};
      if (std::find(quantifiers.begin(), quantifiers.end(), q) == quantifiers.end()) quantifiers.push_back(q);
      return quantifierName(forall, s.param);
    }
    const char* n = connectiveName(s.op);
    if (!n) throw ModalError("unsupported operator in modal problem");
    connectives.insert(n);
    return n;
  }

  std::string fresh() { return "V" + std::to_string(counter_++); }

  std::vector<std::string> env_;
  uint32_t counter_ = 0;
};

}  // namespace

std::string liftedTypeText(Type t) {
  if (t == typeO()) return "mworld > $o";
  if (t->isBase()) return printType(t);
  return parenthesized(t->arg) + " > " + liftedTypeText(t->res);
}

std::string mangleType(Type t) {
  std::string out;
  for (char c : "(" + compact(t) + ")") {
    switch (c) {
      case '(': out += "_o_"; break;
      case ')': out += "_c_"; break;
      case '>': out += "_t_"; break;
      case '$': out += "_d_"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> frameConditions(const LogicSpec& spec) {
  std::set<std::string> schemes;
  if (!spec.system.empty()) {
    static const std::map<std::string, std::vector<std::string>> systems = {
        {"K", {}}, {"D", {"D"}}, {"T", {"T"}}, {"B", {"T", "B"}}, {"S4", {"T", "4"}}, {"S5", {"T", "5"}}};
    auto it = systems.find(spec.system);
    if (it == systems.end()) throw ModalError("unknown modal system '" + spec.system + "'");
    schemes.insert(it->second.begin(), it->second.end());
  }
  for (const std::string& a : spec.axiomSchemes) {
    static const std::set<std::string> known = {"K", "D", "T", "B", "4", "5"};
    if (!known.count(a)) throw ModalError("unknown modal axiom scheme '" + a + "'");
    schemes.insert(a);
  }
  static const std::map<std::string, std::string> property = {
      {"D", "mserial"}, {"T", "mreflexive"}, {"B", "msymmetric"}, {"4", "mtransitive"}, {"5", "meuclidean"}};
  std::vector<std::string> out;
  for (const std::string& p : kProperties)
    for (const std::string& s : schemes)
      if (property.count(s) && property.at(s) == p) {
        out.push_back(p);
        break;
      }
  return out;
}

std::string frameConditionDefinition(const std::string& property) {
  static const std::map<std::string, std::string> bodies = {
      {"mserial", "! [B: mworld] : ? [C: mworld] : ( A @ B @ C )"},
      {"mreflexive", "! [B: mworld] : ( A @ B @ B )"},
      {"msymmetric", "! [B: mworld,C: mworld] : ( ( A @ B @ C ) => ( A @ C @ B ) )"},
      {"mtransitive", "! [B: mworld,C: mworld,D: mworld] : ( ( ( A @ B @ C ) & ( A @ C @ D ) ) => ( A @ B @ D ) )"},
      {"meuclidean", "! [B: mworld,C: mworld,D: mworld] : ( ( ( A @ B @ C ) & ( A @ B @ D ) ) => ( A @ C @ D ) )"},
  };
  auto it = bodies.find(property);
  if (it == bodies.end()) throw ModalError("unknown frame property '" + property + "'");
  return typeLine(property, "( mworld > mworld > $o ) > $o") + "\n" +
         defLine(property, "^ [A: mworld > mworld > $o] : " + it->second);
}

EmbeddingOutput embed(const Problem& p, const EmbedOptions& opts) {
  if (!p.logicSpec) {
    if (p.usesModalOperators()) throw ModalError("modal operator used without a logic specification");
    throw ModalError("problem has no logic specification");
  }
  const LogicSpec& spec = *p.logicSpec;
  if (spec.constants != "rigid" || spec.quantification != "constant")
    throw ModalError("unsupported semantics");
  bool universal = opts.s5 == S5Mode::Universal && spec.system == "S5";
  std::vector<std::string> frame = universal ? std::vector<std::string>{} : frameConditions(spec);
  bool local = spec.consequence == Consequence::Local;

  Lifter lifter;
  std::vector<std::string> baseTypes, types, formulas;
  for (const AnnotatedFormula& f : p.formulas) {
    if (f.role == Role::Logic) continue;
    if (f.role == Role::Type) {
      if (kReserved.count(f.declaredName)) throw ModalError("symbol name '" + f.declaredName + "' is reserved");
      if (!f.declaredType) {
        baseTypes.push_back("thf(" + f.name + ",type,( " + f.declaredName + ": $tType )).");
        continue;
      }
      types.push_back("thf(" + f.name + ",type,( " + f.declaredName + ": " + liftedTypeText(f.declaredType) + " )).");
      continue;
    }
    Term t = normalize(f.formula);
    if (f.role == Role::Definition && isDefinitionFormula(t)) {
      auto args = t.args();
      formulas.push_back("thf(" + f.name + ",definition,( " + lifter.lift(args[0]) + " = " + lifter.lift(args[1]) +
                         " )).");
      continue;
    }
    std::string body = lifter.lift(t);
    std::string wrapped = local ? "( " + body + " @ cw )" : "( mvalid @ " + body + " )";
    if (!local) lifter.connectives.insert("mvalid");
    std::string role = f.role == Role::Definition ? "axiom" : roleName(f.role);
    formulas.push_back("thf(" + f.name + "," + role + "," + wrapped + ").");
  }

  EmbeddingOutput out;
  std::vector<std::string> lines;
  auto emit = [&](const std::string& name, const std::string& text) {
    out.provenance[name] = text;
    lines.push_back(text);
  };
  emit("mworld", typeLine("mworld", "$tType"));
  for (const std::string& t : baseTypes) lines.push_back(t);
  std::string rel = typeLine("mrel", "mworld > mworld > $o");
  if (universal) rel += "\n" + defLine("mrel", "^ [A: mworld,B: mworld] : $true");
  emit("mrel", rel);
  if (local) emit("cw", typeLine("cw", "mworld"));
  for (const std::string& prop : frame) emit(prop, frameConditionDefinition(prop));
  if (lifter.connectives.count("mvalid"))
    emit("mvalid", typeLine("mvalid", "( mworld > $o ) > $o") + "\n" +
                       defLine("mvalid", "^ [A: mworld > $o] : ! [B: mworld] : ( A @ B )"));
  for (const Connective& c : kConnectives)
    if (lifter.connectives.count(c.name))
      emit(c.name, typeLine(c.name, c.type) + "\n" + defLine(c.name, c.body));
  // Existential constants first, as in the reference listing.
  for (bool forall : {false, true}) {
    for (const auto& [qf, ty] : lifter.quantifiers) {
      if (qf != forall) continue;
      std::string name = quantifierName(forall, ty);
      std::string arg = parenthesized(ty);
      std::string body = std::string("^ [A: ") + arg + " > mworld > $o,B: mworld] : " + (forall ? "!" : "?") +
                         " [C: " + liftedTypeText(ty) + "] : ( A @ C @ B )";
      emit(name, typeLine(name, "( " + arg + " > mworld > $o ) > mworld > $o") + "\n" + defLine(name, body));
    }
  }
  for (const std::string& t : types) lines.push_back(t);
  for (const std::string& prop : frame) lines.push_back("thf(mrel_" + prop + ",axiom,( " + prop + " @ mrel )).");
  for (const std::string& f : formulas) lines.push_back(f);
  for (const std::string& l : lines) out.text += l + "\n";
  return out;
}

}  // namespace ep
