// Shared helpers for tests: a seeded random generator of well-typed terms.

#ifndef EP_TESTS_SUPPORT_HPP
#define EP_TESTS_SUPPORT_HPP

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "ep/terms.hpp"

namespace ep::testing {

struct GenConfig {
  bool logical = true;   // connectives and quantifiers at type $o
  bool freeVars = false;
  double lambdaBias = 0.5;
};

class TermGen {
 public:
  TermGen(uint32_t seed, std::vector<SymbolId> constants, GenConfig cfg = {})
      : rng_(seed), constants_(std::move(constants)), cfg_(cfg) {}

  std::mt19937& rng() { return rng_; }
  void addFreeVar(Term v) { freeVars_.push_back(v); }

  Term closed(Type t, int depth) {
    std::vector<Type> env;
    return gen(t, env, depth);
  }

  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

 private:
  struct Head {
    Term term;
    Type type;
  };

  Term gen(Type t, std::vector<Type>& env, int depth) {
    if (t->isFun()) {
      std::vector<Head> exact = heads(env, [&](Type ht) { return ht == t; });
      if (exact.empty() || depth <= 0 || coin(cfg_.lambdaBias)) {
        env.push_back(t->arg);
        Term body = gen(t->res, env, depth - 1);
        env.pop_back();
        return mkAbs(t->arg, body);
      }
      return exact[pick(exact.size())].term;
    }
    if (t == typeO() && cfg_.logical && depth > 0 && coin(0.4)) return logical(env, depth);
    std::vector<Head> hs = heads(env, [&](Type ht) { return resultType(ht) == t; });
    std::vector<Head> leaves;
    for (const Head& h : hs)
      if (h.type == t) leaves.push_back(h);
    if (depth <= 0 || hs.empty()) {
      if (leaves.empty()) {
        if (t == typeO()) return coin() ? mkTrue() : mkFalse();
        throw std::logic_error("generator: no constant of base type " + showType(t));
      }
      return leaves[pick(leaves.size())].term;
    }
    const Head& h = hs[pick(hs.size())];
    std::vector<Term> args;
    for (Type a : argTypes(h.type)) args.push_back(gen(a, env, depth - 1));
    return args.empty() ? h.term : mkApp(h.term, args);
  }

  Term logical(std::vector<Type>& env, int depth) {
    switch (pick(7)) {
      case 0: return mkNot(gen(typeO(), env, depth - 1));
      case 1: return mkOr(gen(typeO(), env, depth - 1), gen(typeO(), env, depth - 1));
      case 2: return mkAnd(gen(typeO(), env, depth - 1), gen(typeO(), env, depth - 1));
      case 3: return mkImplies(gen(typeO(), env, depth - 1), gen(typeO(), env, depth - 1));
      case 4: {
        Type ty = coin() ? typeI() : typeO();
        return mkEq(gen(ty, env, depth - 1), gen(ty, env, depth - 1));
      }
      default: {
        Type ty = coin() ? typeI() : funType(typeI(), typeO());
        env.push_back(ty);
        Term body = gen(typeO(), env, depth - 1);
        env.pop_back();
        return coin() ? mkForall(ty, body) : mkExists(ty, body);
      }
    }
  }

  template <class Pred>
  std::vector<Head> heads(const std::vector<Type>& env, Pred ok) {
    std::vector<Head> out;
    for (SymbolId s : constants_) {
      Type ty = ctx().symbol(s).type;
      if (ok(ty)) out.push_back({mkConst(s), ty});
    }
    for (size_t i = 0; i < env.size(); ++i) {
      Type ty = env[env.size() - 1 - i];
      if (ok(ty)) out.push_back({mkBound(static_cast<uint32_t>(i), ty), ty});
    }
    if (cfg_.freeVars)
      for (const Term& v : freeVars_)
        if (ok(v.type())) out.push_back({v, v.type()});
    return out;
  }

  std::mt19937 rng_;
  std::vector<SymbolId> constants_;
  std::vector<Term> freeVars_;
  GenConfig cfg_;
};

/// All beta-normal eta-long terms of type `t` over `constants` and the bound
/// variables in scope, with head nesting depth at most `depth`.
inline std::vector<Term> enumerateTerms(Type t, int depth, const std::vector<SymbolId>& constants,
                                        std::vector<Type>& env) {
  std::vector<Term> out;
  if (t->isFun()) {
    env.push_back(t->arg);
    for (Term b : enumerateTerms(t->res, depth, constants, env)) out.push_back(mkAbs(t->arg, b));
    env.pop_back();
    return out;
  }
  if (depth <= 0) return out;
  std::vector<Term> heads;
  for (SymbolId s : constants)
    if (resultType(ctx().symbol(s).type) == t) heads.push_back(mkConst(s));
  for (size_t i = 0; i < env.size(); ++i) {
    Type ty = env[env.size() - 1 - i];
    if (resultType(ty) == t) heads.push_back(mkBound(static_cast<uint32_t>(i), ty));
  }
  for (Term h : heads) {
    std::vector<Type> params = argTypes(h.type());
    std::vector<std::vector<Term>> choices;
    bool empty = false;
    for (Type p : params) {
      choices.push_back(enumerateTerms(p, depth - 1, constants, env));
      empty |= choices.back().empty();
    }
    if (empty) continue;
    std::vector<size_t> idx(params.size(), 0);
    for (;;) {
      std::vector<Term> args;
      for (size_t k = 0; k < params.size(); ++k) args.push_back(choices[k][idx[k]]);
      out.push_back(args.empty() ? h : mkApp(h, args));
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

inline std::vector<Term> enumerateClosed(Type t, int depth, const std::vector<SymbolId>& constants) {
  std::vector<Type> env;
  return enumerateTerms(t, depth, constants, env);
}

/// Standard finite models: every base type other than $o has `baseSize`
/// elements, a function type a>b has |b|^|a| elements indexed in base |b|.
class FiniteModel {
 public:
  using Value = uint64_t;

  explicit FiniteModel(uint64_t baseSize = 2) : baseSize_(baseSize) {}

  uint64_t size(Type t) const {
    if (t->isBase()) return t == typeO() ? 2 : baseSize_;
    uint64_t a = size(t->arg), b = size(t->res), r = 1;
    for (uint64_t i = 0; i < a; ++i) {
      r *= b;
      if (r > (1u << 20)) throw std::length_error("finite model: domain too large");
    }
    return r;
  }

  Value apply(Type ft, Value f, Value x) const {
    uint64_t b = size(ft->res);
    for (uint64_t i = 0; i < x; ++i) f /= b;
    return f % b;
  }

  std::map<SymbolId, Value> constants;
  std::map<VarId, Value> vars;

  Value eval(Term t) {
    std::vector<Value> env;
    return eval(t, env);
  }

  /// Every assignment of the listed constants and variables.
  template <class F>
  void forAll(const std::vector<SymbolId>& cs, const std::vector<Term>& vs, F&& f) {
    enumerate(cs, vs, 0, f);
  }

 private:
  template <class F>
  bool enumerate(const std::vector<SymbolId>& cs, const std::vector<Term>& vs, size_t i, F& f) {
    size_t n = cs.size() + vs.size();
    if (i == n) return f();
    Type ty = i < cs.size() ? ctx().symbol(cs[i]).type : vs[i - cs.size()].type();
    for (Value v = 0; v < size(ty); ++v) {
      if (i < cs.size()) constants[cs[i]] = v;
      else vars[vs[i - cs.size()].var()] = v;
      if (!enumerate(cs, vs, i + 1, f)) return false;
    }
    return true;
  }

  Value lambda(Type ft, const std::function<Value(Value)>& body) const {
    uint64_t a = size(ft->arg), b = size(ft->res);
    Value out = 0, mul = 1;
    for (uint64_t x = 0; x < a; ++x) {
      out += body(x) * mul;
      mul *= b;
    }
    return out;
  }

  Value eval(Term t, std::vector<Value>& env) {
    switch (t.kind()) {
      case TermKind::Bound: return env[env.size() - 1 - t.index()];
      case TermKind::Free: return vars.at(t.var());
      case TermKind::Abs:
        return lambda(t.type(), [&](Value x) {
          env.push_back(x);
          Value r = eval(t.body(), env);
          env.pop_back();
          return r;
        });
      case TermKind::Const: return constant(t);
      case TermKind::App: {
        if (auto v = direct(t, env)) return *v;
        Term h = t.head();
        Type ht = h.type();
        Value f = eval(h, env);
        for (const Term& a : t.args()) {
          f = apply(ht, f, eval(a, env));
          ht = ht->res;
        }
        return f;
      }
    }
    return 0;
  }

  // Saturated logical applications without building operator tables.
  std::optional<Value> direct(Term t, std::vector<Value>& env) {
    Term h = t.head();
    if (!h.isConst()) return std::nullopt;
    const Symbol& s = ctx().symbol(h.symbol());
    auto a = t.args();
    switch (s.op) {
      case Logical::Not:
        if (a.size() == 1) return 1 - eval(a[0], env);
        break;
      case Logical::Or:
      case Logical::And:
      case Logical::Implies:
      case Logical::Equiv:
      case Logical::Eq:
        if (a.size() == 2) {
          Value x = eval(a[0], env), y = eval(a[1], env);
          if (s.op == Logical::Or) return (x || y) ? 1 : 0;
          if (s.op == Logical::And) return (x && y) ? 1 : 0;
          if (s.op == Logical::Implies) return (!x || y) ? 1 : 0;
          return x == y ? 1 : 0;
        }
        break;
      case Logical::Forall:
      case Logical::Exists:
        if (a.size() == 1) {
          bool all = s.op == Logical::Forall;
          Value p = eval(a[0], env);
          for (Value x = 0; x < size(s.param); ++x)
            if ((apply(a[0].type(), p, x) == 1) != all) return all ? 0 : 1;
          return all ? 1 : 0;
        }
        break;
      default:
        break;
    }
    return std::nullopt;
  }

  Value constant(Term t) {
    const Symbol& s = ctx().symbol(t.symbol());
    Type o = typeO();
    auto bin = [&](auto op) {
      return lambda(funType(o, funType(o, o)),
                    [&](Value x) { return lambda(funType(o, o), [&](Value y) { return op(x, y) ? 1 : 0; }); });
    };
    switch (s.op) {
      case Logical::True: return 1;
      case Logical::False: return 0;
      case Logical::Not: return lambda(funType(o, o), [](Value x) { return 1 - x; });
      case Logical::Or: return bin([](Value x, Value y) { return x || y; });
      case Logical::And: return bin([](Value x, Value y) { return x && y; });
      case Logical::Implies: return bin([](Value x, Value y) { return !x || y; });
      case Logical::Equiv: return bin([](Value x, Value y) { return x == y; });
      case Logical::Eq:
        return lambda(s.type, [&](Value x) {
          return lambda(s.type->res, [&](Value y) -> Value { return x == y ? 1 : 0; });
        });
      case Logical::Forall:
      case Logical::Exists: {
        Type pt = s.type->arg;
        bool all = s.op == Logical::Forall;
        return lambda(s.type, [&](Value p) -> Value {
          for (Value x = 0; x < size(s.param); ++x)
            if ((apply(pt, p, x) == 1) != all) return all ? 0 : 1;
          return all ? 1 : 0;
        });
      }
      case Logical::None: return constants.at(t.symbol());
      default: throw std::logic_error("finite model: modal operator");
    }
  }

  uint64_t baseSize_;
};

}  // namespace ep::testing

#endif  // EP_TESTS_SUPPORT_HPP
