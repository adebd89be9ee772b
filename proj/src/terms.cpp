#include "ep/terms.hpp"

#include <algorithm>
#include <sstream>

namespace ep {

namespace {

thread_local Context* g_active = nullptr;

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Context& ctx() {
  if (g_active == nullptr) {
    static thread_local Context fallback;
    g_active = &fallback;
  }
  return *g_active;
}

ContextScope::ContextScope() : owned_(std::make_unique<Context>()), previous_(g_active) {
  g_active = owned_.get();
}

ContextScope::~ContextScope() { g_active = previous_; }

// ---------------------------------------------------------------------------
// Types

Type baseType(const std::string& name) { return ctx().base(name); }
Type funType(Type arg, Type res) { return ctx().fun(arg, res); }
Type funType(std::span<const Type> args, Type res) {
  Type t = res;
  for (size_t i = args.size(); i-- > 0;) t = funType(args[i], t);
  return t;
}
Type typeI() { return baseType("$i"); }
Type typeO() { return baseType("$o"); }

std::vector<Type> argTypes(Type t) {
  std::vector<Type> out;
  while (t->isFun()) {
    out.push_back(t->arg);
    t = t->res;
  }
  return out;
}

Type resultType(Type t) {
  while (t->isFun()) t = t->res;
  return t;
}

size_t arity(Type t) {
  size_t n = 0;
  while (t->isFun()) {
    ++n;
    t = t->res;
  }
  return n;
}

Type dropArgs(Type t, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (!t->isFun()) throw TypeError("too many arguments for type " + showType(t));
    t = t->res;
  }
  return t;
}

std::string showType(Type t) {
  if (t->isBase()) return t->name;
  std::string lhs = t->arg->isFun() ? "(" + showType(t->arg) + ")" : showType(t->arg);
  return lhs + " > " + showType(t->res);
}

// ---------------------------------------------------------------------------
// Context

bool Context::KeyEq::operator()(const TermNode* a, const TermNode* b) const {
  return a->kind == b->kind && a->type == b->type && a->payload == b->payload &&
         a->binderType == b->binderType && a->body == b->body && a->head == b->head &&
         a->args == b->args;
}

Context::Context() {
  declareBaseType("$i");
  declareBaseType("$o");
  Type o = base("$o");
  Type oo = fun(o, o);
  Type ooo = fun(o, oo);
  auto reg = [&](const std::string& name, Type t, Logical op) {
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back(Symbol{name, t, SymbolKind::Logical, op, nullptr});
    logicals_[{op, 0}] = id;
  };
  reg("$true", o, Logical::True);
  reg("$false", o, Logical::False);
  reg("~", oo, Logical::Not);
  reg("|", ooo, Logical::Or);
  reg("&", ooo, Logical::And);
  reg("=>", ooo, Logical::Implies);
  reg("<=>", ooo, Logical::Equiv);
  reg("$box", oo, Logical::Box);
  reg("$dia", oo, Logical::Dia);
}

bool Context::isBaseTypeDeclared(const std::string& name) const { return baseTypes_.count(name) > 0; }

void Context::declareBaseType(const std::string& name) { base(name); }

Type Context::base(const std::string& name) {
  auto it = baseTypes_.find(name);
  if (it != baseTypes_.end()) return it->second;
  TypeNode& n = types_.emplace_back();
  n.kind = TypeNode::Kind::Base;
  n.name = name;
  n.id = static_cast<uint32_t>(types_.size());
  baseTypes_[name] = &n;
  baseOrder_.push_back(&n);
  return &n;
}

Type Context::fun(Type arg, Type res) {
  auto key = std::make_pair(arg->id, res->id);
  auto it = funTypes_.find(key);
  if (it != funTypes_.end()) return it->second;
  TypeNode& n = types_.emplace_back();
  n.kind = TypeNode::Kind::Fun;
  n.arg = arg;
  n.res = res;
  n.id = static_cast<uint32_t>(types_.size());
  funTypes_[key] = &n;
  return &n;
}

SymbolId Context::declare(const std::string& name, Type type, SymbolKind kind) {
  auto it = byName_.find(name);
  if (it != byName_.end()) {
    if (symbols_[it->second].type != type)
      throw TypeError("symbol '" + name + "' redeclared with a different type");
    return it->second;
  }
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{name, type, kind, Logical::None, nullptr});
  byName_[name] = id;
  return id;
}

std::optional<SymbolId> Context::lookup(const std::string& name) const {
  auto it = byName_.find(name);
  if (it == byName_.end()) return std::nullopt;
  return it->second;
}

SymbolId Context::logical(Logical op) { return logicals_.at({op, 0}); }

SymbolId Context::logical(Logical op, Type param) {
  auto key = std::make_pair(op, param->id);
  auto it = logicals_.find(key);
  if (it != logicals_.end()) return it->second;
  Type o = base("$o");
  Type t;
  std::string name;
  switch (op) {
    case Logical::Eq:
      t = fun(param, fun(param, o));
      name = "=";
      break;
    case Logical::Forall:
      t = fun(fun(param, o), o);
      name = "!";
      break;
    case Logical::Exists:
      t = fun(fun(param, o), o);
      name = "?";
      break;
    default:
      throw std::logic_error("logical(op, type) needs a type-indexed family");
  }
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{name, t, SymbolKind::Logical, op, param});
  logicals_[key] = id;
  return id;
}

SymbolId Context::freshSymbol(const std::string& prefix, Type type, SymbolKind kind) {
  uint32_t& counter = freshCounters_[prefix];
  std::string name;
  do {
    name = prefix + std::to_string(++counter);
  } while (byName_.count(name) > 0);
  return declare(name, type, kind);
}

Term Context::intern(TermNode&& node) {
  size_t h = static_cast<size_t>(node.kind);
  h = mix(h, node.type->id);
  h = mix(h, node.payload);
  h = mix(h, node.binderType ? node.binderType->id : 0);
  h = mix(h, std::hash<const void*>()(node.body.node()));
  h = mix(h, std::hash<const void*>()(node.head.node()));
  for (const Term& a : node.args) h = mix(h, std::hash<const void*>()(a.node()));
  node.hash = h;
  auto it = table_.find(&node);
  if (it != table_.end()) return Term(*it);
  node.id = static_cast<uint32_t>(nodes_.size());
  TermNode& stored = nodes_.emplace_back(std::move(node));
  table_.insert(&stored);
  return Term(&stored);
}

// ---------------------------------------------------------------------------
// Term accessors

TermKind Term::kind() const { return n_->kind; }
Type Term::type() const { return n_->type; }
uint32_t Term::id() const { return n_->id; }
SymbolId Term::symbol() const { return n_->payload; }
VarId Term::var() const { return n_->payload; }
uint32_t Term::index() const { return n_->payload; }
Type Term::binderType() const { return n_->binderType; }
Term Term::body() const { return n_->body; }
Term Term::head() const { return n_->kind == TermKind::App ? n_->head : *this; }
std::span<const Term> Term::args() const { return n_->args; }
uint32_t Term::looseBound() const { return n_->looseBound; }
bool Term::hasFreeVars() const { return n_->hasFree; }
uint32_t Term::size() const { return n_->size; }
bool Term::betaNormal() const { return n_->betaNormal; }
bool Term::etaLong() const { return n_->etaLong; }

bool Term::isFlex() const {
  Term t = *this;
  while (t.isAbs()) t = t.body();
  return t.head().isFree();
}

Logical Term::logicalHead() const {
  Term h = head();
  if (!h.isConst()) return Logical::None;
  return ctx().symbol(h.symbol()).op;
}

// ---------------------------------------------------------------------------
// Constructors

Term mkConst(SymbolId s) {
  TermNode n{};
  n.kind = TermKind::Const;
  n.type = ctx().symbol(s).type;
  n.payload = s;
  n.etaLong = n.type->isBase();
  return ctx().intern(std::move(n));
}

Term mkFree(VarId v, Type t) {
  TermNode n{};
  n.kind = TermKind::Free;
  n.type = t;
  n.payload = v;
  n.hasFree = true;
  n.etaLong = t->isBase();
  return ctx().intern(std::move(n));
}

Term mkFreshVar(Type t) { return mkFree(ctx().freshVarId(), t); }

Term mkBound(uint32_t index, Type t) {
  TermNode n{};
  n.kind = TermKind::Bound;
  n.type = t;
  n.payload = index;
  n.looseBound = index + 1;
  n.etaLong = t->isBase();
  return ctx().intern(std::move(n));
}

Term mkAbs(Type param, Term body) {
  TermNode n{};
  n.kind = TermKind::Abs;
  n.type = funType(param, body.type());
  n.payload = 0;
  n.binderType = param;
  n.body = body;
  n.looseBound = body.looseBound() > 0 ? body.looseBound() - 1 : 0;
  n.hasFree = body.hasFreeVars();
  n.size = body.size() + 1;
  n.betaNormal = body.betaNormal();
  n.etaLong = body.etaLong();
  return ctx().intern(std::move(n));
}

Term mkApp(Term head, std::span<const Term> args) {
  if (args.empty()) return head;
  std::vector<Term> all;
  Term h = head;
  if (head.isApp()) {
    h = head.head();
    all.assign(head.args().begin(), head.args().end());
  }
  all.insert(all.end(), args.begin(), args.end());
  Type t = head.type();
  for (const Term& a : args) {
    if (!t->isFun()) throw TypeError("application of non-function " + showTerm(head));
    if (t->arg != a.type())
      throw TypeError("argument type mismatch: expected " + showType(t->arg) + ", got " +
                      showType(a.type()) + " in application of " + showTerm(head));
    t = t->res;
  }
  TermNode n{};
  n.kind = TermKind::App;
  n.type = t;
  n.payload = 0;
  n.head = h;
  n.looseBound = h.looseBound();
  n.hasFree = h.hasFreeVars();
  n.size = h.size();
  n.betaNormal = !h.isAbs() && h.betaNormal();
  n.etaLong = t->isBase();
  for (const Term& a : all) {
    n.looseBound = std::max(n.looseBound, a.looseBound());
    n.hasFree = n.hasFree || a.hasFreeVars();
    n.size += a.size();
    n.betaNormal = n.betaNormal && a.betaNormal();
    n.etaLong = n.etaLong && a.etaLong();
  }
  n.args = std::move(all);
  return ctx().intern(std::move(n));
}

Term mkApp(Term head, std::initializer_list<Term> args) {
  return mkApp(head, std::span<const Term>(args.begin(), args.size()));
}

Term mkTrue() { return mkConst(ctx().logical(Logical::True)); }
Term mkFalse() { return mkConst(ctx().logical(Logical::False)); }
Term mkNot(Term a) { return mkApp(mkConst(ctx().logical(Logical::Not)), {a}); }
Term mkOr(Term a, Term b) { return mkApp(mkConst(ctx().logical(Logical::Or)), {a, b}); }
Term mkAnd(Term a, Term b) { return mkApp(mkConst(ctx().logical(Logical::And)), {a, b}); }
Term mkImplies(Term a, Term b) { return mkApp(mkConst(ctx().logical(Logical::Implies)), {a, b}); }
Term mkEquiv(Term a, Term b) { return mkApp(mkConst(ctx().logical(Logical::Equiv)), {a, b}); }
Term mkEq(Term a, Term b) {
  if (a.type() != b.type()) throw TypeError("equation between different types");
  return mkApp(mkConst(ctx().logical(Logical::Eq, a.type())), {a, b});
}
Term mkForall(Type t, Term body) {
  return mkApp(mkConst(ctx().logical(Logical::Forall, t)), {mkAbs(t, body)});
}
Term mkExists(Type t, Term body) {
  return mkApp(mkConst(ctx().logical(Logical::Exists, t)), {mkAbs(t, body)});
}

// ---------------------------------------------------------------------------
// De Bruijn machinery

Term shift(Term t, int delta, uint32_t cutoff) {
  if (delta == 0 || t.looseBound() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return mkBound(static_cast<uint32_t>(static_cast<int>(t.index()) + delta), t.type());
    case TermKind::Abs:
      return mkAbs(t.binderType(), shift(t.body(), delta, cutoff + 1));
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(shift(a, delta, cutoff));
      return mkApp(shift(t.head(), delta, cutoff), args);
    }
    default:
      return t;
  }
}

namespace {

Term substBound(Term t, uint32_t depth, Term arg) {
  if (t.looseBound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() == depth) return shift(arg, static_cast<int>(depth));
      return mkBound(t.index() - 1, t.type());
    case TermKind::Abs:
      return mkAbs(t.binderType(), substBound(t.body(), depth + 1, arg));
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(substBound(a, depth, arg));
      return mkApp(substBound(t.head(), depth, arg), args);
    }
    default:
      return t;
  }
}

}  // namespace

Term instantiate(Term body, Term arg) { return substBound(body, 0, arg); }

Term betaNormalize(Term t) {
  if (t.betaNormal()) return t;
  switch (t.kind()) {
    case TermKind::Abs:
      return mkAbs(t.binderType(), betaNormalize(t.body()));
    case TermKind::App: {
      Term h = t.head();
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(betaNormalize(a));
      if (!h.isAbs()) return mkApp(h, args);
      h = betaNormalize(h);
      size_t i = 0;
      while (i < args.size() && h.isAbs()) {
        h = betaNormalize(instantiate(h.body(), args[i]));
        ++i;
      }
      std::span<const Term> rest(args.data() + i, args.size() - i);
      return betaNormalize(mkApp(h, rest));
    }
    default:
      return t;
  }
}

Term abstractOver(std::span<const Type> params, Term body) {
  for (size_t i = params.size(); i-- > 0;) body = mkAbs(params[i], body);
  return body;
}

Term etaLong(Term t) {
  if (t.etaLong()) return t;
  if (t.isAbs()) return mkAbs(t.binderType(), etaLong(t.body()));
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(etaLong(a));
  Term h = t.head();
  Type ty = t.type();
  if (ty->isBase()) return mkApp(h, args);
  std::vector<Type> params = argTypes(ty);
  const auto n = static_cast<int>(params.size());
  h = shift(h, n);
  for (Term& a : args) a = shift(a, n);
  for (int k = 0; k < n; ++k)
    args.push_back(etaLong(mkBound(static_cast<uint32_t>(n - 1 - k), params[static_cast<size_t>(k)])));
  return abstractOver(params, mkApp(h, args));
}

Term etaExpandAtom(Term atom) { return etaLong(atom); }

Term normalize(Term t) {
  if (t.betaNormal() && t.etaLong()) return t;
  return etaLong(betaNormalize(t));
}

// ---------------------------------------------------------------------------
// Substitution

void Substitution::bind(VarId v, Term t) {
  if (!t.closed()) throw TypeError("substitution image has loose bound variables");
  map_[v] = t;
}

std::optional<Term> Substitution::lookup(VarId v) const {
  auto it = map_.find(v);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Substitution Substitution::after(const Substitution& other) const {
  Substitution out;
  for (const auto& [v, t] : other.map_) out.map_[v] = substitute(t, *this);
  for (const auto& [v, t] : map_)
    if (!out.map_.count(v)) out.map_[v] = t;
  return out;
}

namespace {

Term substRawImpl(Term t, const Substitution& s, std::unordered_map<Term, Term, TermHash>& memo) {
  if (!t.hasFreeVars()) return t;
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  Term out = t;
  switch (t.kind()) {
    case TermKind::Free:
      if (auto b = s.lookup(t.var())) {
        if ((*b).type() != t.type()) throw TypeError("type-mismatched substitution binding");
        out = *b;
      }
      break;
    case TermKind::Abs:
      out = mkAbs(t.binderType(), substRawImpl(t.body(), s, memo));
      break;
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(substRawImpl(a, s, memo));
      out = mkApp(substRawImpl(t.head(), s, memo), args);
      break;
    }
    default:
      break;
  }
  memo.emplace(t, out);
  return out;
}

}  // namespace

Term substituteRaw(Term t, const Substitution& s) {
  if (s.empty()) return t;
  std::unordered_map<Term, Term, TermHash> memo;
  return substRawImpl(t, s, memo);
}

Term substitute(Term t, const Substitution& s) {
  if (s.empty()) return t;
  return normalize(substituteRaw(t, s));
}

// ---------------------------------------------------------------------------
// Positions

Term subtermAt(Term t, const Position& p) {
  for (const PositionStep& step : p) {
    switch (step.kind) {
      case PositionStep::Kind::Arg:
        if (!t.isApp() || step.index >= t.args().size())
          throw std::invalid_argument("invalid position");
        t = t.args()[step.index];
        break;
      case PositionStep::Kind::Body:
        if (!t.isAbs()) throw std::invalid_argument("invalid position");
        t = t.body();
        break;
      case PositionStep::Kind::Head:
        t = t.head();
        break;
    }
  }
  return t;
}

namespace {

Term replaceAtImpl(Term t, const Position& p, size_t i, Term r) {
  if (i == p.size()) {
    if (t.type() != r.type()) throw TypeError("replacement changes the type");
    return r;
  }
  const PositionStep& step = p[i];
  switch (step.kind) {
    case PositionStep::Kind::Arg: {
      if (!t.isApp() || step.index >= t.args().size())
        throw std::invalid_argument("invalid position");
      std::vector<Term> args(t.args().begin(), t.args().end());
      args[step.index] = replaceAtImpl(args[step.index], p, i + 1, r);
      return mkApp(t.head(), args);
    }
    case PositionStep::Kind::Body:
      if (!t.isAbs()) throw std::invalid_argument("invalid position");
      return mkAbs(t.binderType(), replaceAtImpl(t.body(), p, i + 1, r));
    case PositionStep::Kind::Head: {
      if (i + 1 != p.size()) throw std::invalid_argument("invalid position");
      Term nh = replaceAtImpl(t.head(), p, i + 1, r);
      return t.isApp() ? mkApp(nh, t.args()) : nh;
    }
  }
  return t;
}

void closedPositionsImpl(Term t, Position& cur, std::vector<Position>& out) {
  if (t.closed()) out.push_back(cur);
  if (t.isAbs()) {
    cur.push_back({PositionStep::Kind::Body, 0});
    closedPositionsImpl(t.body(), cur, out);
    cur.pop_back();
  } else if (t.isApp()) {
    for (uint32_t i = 0; i < t.args().size(); ++i) {
      cur.push_back({PositionStep::Kind::Arg, i});
      closedPositionsImpl(t.args()[i], cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

Term replaceAt(Term t, const Position& p, Term r) { return replaceAtImpl(t, p, 0, r); }

std::vector<Position> closedPositions(Term t) {
  std::vector<Position> out;
  Position cur;
  closedPositionsImpl(t, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// Queries

void collectFreeVars(Term t, std::vector<Term>& out, std::unordered_set<VarId>& seen) {
  if (!t.hasFreeVars()) return;
  switch (t.kind()) {
    case TermKind::Free:
      if (seen.insert(t.var()).second) out.push_back(t);
      break;
    case TermKind::Abs:
      collectFreeVars(t.body(), out, seen);
      break;
    case TermKind::App:
      collectFreeVars(t.head(), out, seen);
      for (const Term& a : t.args()) collectFreeVars(a, out, seen);
      break;
    default:
      break;
  }
}

std::vector<Term> freeVars(Term t) {
  std::vector<Term> out;
  std::unordered_set<VarId> seen;
  collectFreeVars(t, out, seen);
  return out;
}

bool occursFree(VarId v, Term t) {
  if (!t.hasFreeVars()) return false;
  switch (t.kind()) {
    case TermKind::Free:
      return t.var() == v;
    case TermKind::Abs:
      return occursFree(v, t.body());
    case TermKind::App:
      if (occursFree(v, t.head())) return true;
      for (const Term& a : t.args())
        if (occursFree(v, a)) return true;
      return false;
    default:
      return false;
  }
}

bool containsSymbol(Term t, SymbolId s) {
  switch (t.kind()) {
    case TermKind::Const:
      return t.symbol() == s;
    case TermKind::Abs:
      return containsSymbol(t.body(), s);
    case TermKind::App:
      if (containsSymbol(t.head(), s)) return true;
      for (const Term& a : t.args())
        if (containsSymbol(a, s)) return true;
      return false;
    default:
      return false;
  }
}

namespace {
void symbolsImpl(Term t, std::vector<SymbolId>& out) {
  switch (t.kind()) {
    case TermKind::Const:
      if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
      break;
    case TermKind::Abs:
      symbolsImpl(t.body(), out);
      break;
    case TermKind::App:
      symbolsImpl(t.head(), out);
      for (const Term& a : t.args()) symbolsImpl(a, out);
      break;
    default:
      break;
  }
}
}  // namespace

std::vector<SymbolId> symbolsOf(Term t) {
  std::vector<SymbolId> out;
  symbolsImpl(t, out);
  return out;
}

std::string showTerm(Term t) {
  std::ostringstream os;
  switch (t.kind()) {
    case TermKind::Const:
      os << ctx().symbol(t.symbol()).name;
      break;
    case TermKind::Free:
      os << "V" << t.var();
      break;
    case TermKind::Bound:
      os << "#" << t.index();
      break;
    case TermKind::Abs:
      os << "(^" << showType(t.binderType()) << ". " << showTerm(t.body()) << ")";
      break;
    case TermKind::App:
      os << "(" << showTerm(t.head());
      for (const Term& a : t.args()) os << " " << showTerm(a);
      os << ")";
      break;
  }
  return os.str();
}

}  // namespace ep

namespace ep {

std::optional<uint32_t> boundVarOf(Term t) {
  uint32_t m = 0;
  while (t.isAbs()) {
    ++m;
    t = t.body();
  }
  Term h = t.head();
  if (!h.isBound() || h.index() < m) return std::nullopt;
  auto args = t.args();
  if (args.size() != m) return std::nullopt;
  for (uint32_t k = 0; k < m; ++k) {
    auto b = boundVarOf(args[k]);
    if (!b || *b != m - 1 - k) return std::nullopt;
  }
  return h.index() - m;
}

namespace {

std::optional<Term> abstractImpl(Term t, uint32_t k, const std::vector<uint32_t>& bvars) {
  if (t.looseBound() <= k) return t;
  const auto n = static_cast<uint32_t>(bvars.size());
  switch (t.kind()) {
    case TermKind::Bound: {
      uint32_t outer = t.index() - k;
      for (uint32_t i = 0; i < n; ++i)
        if (bvars[i] == outer) return mkBound(k + (n - 1 - i), t.type());
      return std::nullopt;
    }
    case TermKind::Abs: {
      auto b = abstractImpl(t.body(), k + 1, bvars);
      if (!b) return std::nullopt;
      return mkAbs(t.binderType(), *b);
    }
    case TermKind::App: {
      auto h = abstractImpl(t.head(), k, bvars);
      if (!h) return std::nullopt;
      std::vector<Term> args;
      for (const Term& a : t.args()) {
        auto na = abstractImpl(a, k, bvars);
        if (!na) return std::nullopt;
        args.push_back(*na);
      }
      return mkApp(*h, args);
    }
    default:
      return t;
  }
}

}  // namespace

std::optional<Term> abstractPattern(Term t, const std::vector<uint32_t>& bvars,
                                    const std::vector<Type>& types) {
  auto body = abstractImpl(t, 0, bvars);
  if (!body) return std::nullopt;
  return abstractOver(types, *body);
}

}  // namespace ep
