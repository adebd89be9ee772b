#include "ep/unify.hpp"

#include <algorithm>
#include <stdexcept>

namespace ep {

// ---------------------------------------------------------------------------
// General bindings

namespace {

/// lambda X1..Xn. head (H1 X1..Xn) ... (Hm X1..Xn), where head has type
/// headType expressed under the n binders.
Term partialBinding(const std::vector<Type>& params, Term head) {
  const auto n = static_cast<uint32_t>(params.size());
  std::vector<Term> xs;
  for (uint32_t j = 0; j < n; ++j) xs.push_back(etaLong(mkBound(n - 1 - j, params[j])));
  std::vector<Term> rs;
  for (Type gamma : argTypes(head.type())) {
    Term h = mkFreshVar(funType(params, gamma));
    rs.push_back(mkApp(h, xs));
  }
  return normalize(abstractOver(params, mkApp(head, rs)));
}

}  // namespace

std::optional<GeneralBinding> imitationBinding(Type goal, SymbolId headConstant) {
  Type headType = ctx().symbol(headConstant).type;
  if (resultType(headType) != resultType(goal)) return std::nullopt;
  std::vector<Type> params = argTypes(goal);
  return GeneralBinding{goal, true, headConstant, partialBinding(params, mkConst(headConstant))};
}

std::vector<GeneralBinding> generalBindings(Type goal, std::optional<SymbolId> headConstant) {
  std::vector<GeneralBinding> out;
  if (headConstant) {
    if (auto b = imitationBinding(goal, *headConstant)) out.push_back(*b);
  }
  std::vector<Type> params = argTypes(goal);
  const auto n = static_cast<uint32_t>(params.size());
  for (uint32_t i = 0; i < n; ++i) {
    if (resultType(params[i]) != resultType(goal)) continue;
    Term head = mkBound(n - 1 - i, params[i]);
    out.push_back(GeneralBinding{goal, false, i, partialBinding(params, head)});
  }
  return out;
}

std::vector<Constraint> constraintsOf(const std::vector<Literal>& lits) {
  std::vector<Constraint> out;
  for (const Literal& l : lits)
    if (l.negative()) out.emplace_back(l.lhs, l.rhs);
  return out;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

/// X b1..bn with distinct bound-variable arguments.
std::optional<std::vector<uint32_t>> patternArgs(Term t) {
  std::vector<uint32_t> out;
  for (const Term& a : t.args()) {
    auto b = boundVarOf(a);
    if (!b || std::find(out.begin(), out.end(), *b) != out.end()) return std::nullopt;
    out.push_back(*b);
  }
  return out;
}

std::vector<Type> argTypesOf(Term t) {
  std::vector<Type> out;
  for (const Term& a : t.args()) out.push_back(a.type());
  return out;
}

bool sameRigidHead(Term a, Term b) {
  Term ha = a.head();
  Term hb = b.head();
  if (ha.kind() != hb.kind()) return false;
  if (ha.isConst()) return ha.symbol() == hb.symbol();
  if (ha.isBound()) return ha.index() == hb.index();
  return false;
}

}  // namespace

bool isPatternTerm(Term t) {
  while (t.isAbs()) t = t.body();
  if (t.head().isFree() && !patternArgs(t)) return false;
  for (const Term& a : t.args())
    if (!isPatternTerm(a)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Pre-unification

PreUnifier::PreUnifier(std::vector<Constraint> constraints, UnifConfig config)
    : original_(std::move(constraints)), config_(config) {
  State init;
  for (const auto& [l, r] : original_) {
    if (l.type() != r.type()) throw TypeError("constraint between different types");
    init.eqs.push_back(Eq{{}, normalize(l), normalize(r)});
  }
  queue_.push_back(std::move(init));
}

bool PreUnifier::simplify(State& st) const {
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < st.eqs.size(); ++i) {
      Eq& e = st.eqs[i];
      while (e.lhs.isAbs() && e.rhs.isAbs()) {
        e.binders.push_back(e.lhs.binderType());
        e.lhs = e.lhs.body();
        e.rhs = e.rhs.body();
      }
      if (e.lhs == e.rhs) {  // Triv
        st.eqs.erase(st.eqs.begin() + static_cast<long>(i));
        progress = true;
        break;
      }
      bool lflex = e.lhs.head().isFree();
      bool rflex = e.rhs.head().isFree();
      if (!lflex && !rflex) {  // Decomp or clash
        if (!sameRigidHead(e.lhs, e.rhs) || e.lhs.args().size() != e.rhs.args().size()) return false;
        Eq parent = e;
        st.eqs.erase(st.eqs.begin() + static_cast<long>(i));
        for (size_t k = 0; k < parent.lhs.args().size(); ++k)
          st.eqs.push_back(Eq{parent.binders, parent.lhs.args()[k], parent.rhs.args()[k]});
        progress = true;
        break;
      }
      // Bind: X b1..bn = t with X not free in t and t's loose variables among b.
      for (int side = 0; side < 2 && !progress; ++side) {
        Term flex = side == 0 ? e.lhs : e.rhs;
        Term other = side == 0 ? e.rhs : e.lhs;
        if (!flex.head().isFree()) continue;
        VarId x = flex.head().var();
        if (occursFree(x, other)) continue;
        auto bvars = patternArgs(flex);
        if (!bvars) continue;
        auto image = abstractPattern(other, *bvars, argTypesOf(flex));
        if (!image) continue;
        Substitution b;
        b.bind(x, *image);
        st.subst = b.after(st.subst);
        st.eqs.erase(st.eqs.begin() + static_cast<long>(i));
        for (Eq& rest : st.eqs) {
          rest.lhs = substitute(rest.lhs, b);
          rest.rhs = substitute(rest.rhs, b);
        }
        progress = true;
      }
      if (progress) break;
    }
  }
  return true;
}

void PreUnifier::expand(const State& st, size_t eqIndex) {
  const Eq& e = st.eqs[eqIndex];
  Term flex = e.lhs.head().isFree() ? e.lhs : e.rhs;
  Term rigid = e.lhs.head().isFree() ? e.rhs : e.lhs;
  Term x = flex.head();
  std::optional<SymbolId> imitate;
  if (rigid.head().isConst()) imitate = rigid.head().symbol();
  for (const GeneralBinding& gb : generalBindings(x.type(), imitate)) {
    State child;
    child.depth = st.depth + 1;
    Substitution b;
    b.bind(x.var(), gb.binding);
    child.subst = b.after(st.subst);
    child.eqs.reserve(st.eqs.size());
    for (const Eq& other : st.eqs)
      child.eqs.push_back(Eq{other.binders, substitute(other.lhs, b), substitute(other.rhs, b)});
    queue_.push_back(std::move(child));
  }
}

void PreUnifier::expandFlexFlex(const State& st) {
  Term x = st.eqs.front().lhs.head();
  std::vector<GeneralBinding> bindings;
  Context& c = ctx();
  for (SymbolId s = 0; s < c.symbolCount(); ++s) {
    if (c.symbol(s).kind == SymbolKind::Logical) continue;
    if (auto b = imitationBinding(x.type(), s)) bindings.push_back(*b);
  }
  for (const GeneralBinding& gb : generalBindings(x.type(), std::nullopt)) bindings.push_back(gb);
  for (const GeneralBinding& gb : bindings) {
    State child;
    child.depth = st.depth + 1;
    Substitution b;
    b.bind(x.var(), gb.binding);
    child.subst = b.after(st.subst);
    for (const Eq& other : st.eqs)
      child.eqs.push_back(Eq{other.binders, substitute(other.lhs, b), substitute(other.rhs, b)});
    queue_.push_back(std::move(child));
  }
}

bool PreUnifier::verify(const UnifResult& r) const {
  std::vector<Eq> work;
  for (const auto& [l, rr] : original_)
    work.push_back(Eq{{}, substitute(l, r.substitution), substitute(rr, r.substitution)});
  while (!work.empty()) {
    Eq e = work.back();
    work.pop_back();
    while (e.lhs.isAbs() && e.rhs.isAbs()) {
      e.lhs = e.lhs.body();
      e.rhs = e.rhs.body();
    }
    if (e.lhs == e.rhs) continue;
    bool lflex = e.lhs.head().isFree();
    bool rflex = e.rhs.head().isFree();
    if (lflex && rflex) continue;
    if (lflex || rflex) return false;
    if (!sameRigidHead(e.lhs, e.rhs) || e.lhs.args().size() != e.rhs.args().size()) return false;
    for (size_t k = 0; k < e.lhs.args().size(); ++k)
      work.push_back(Eq{{}, e.lhs.args()[k], e.rhs.args()[k]});
  }
  return true;
}

std::optional<UnifResult> PreUnifier::next() {
  while (!queue_.empty()) {
    State st = std::move(queue_.front());
    queue_.pop_front();
    if (++statesSeen_ > config_.maxStates) {
      boundReached_ = true;
      queue_.clear();
      break;
    }
    if (!simplify(st)) continue;
    std::optional<size_t> flexRigid;
    for (size_t i = 0; i < st.eqs.size(); ++i) {
      bool lflex = st.eqs[i].lhs.head().isFree();
      bool rflex = st.eqs[i].rhs.head().isFree();
      if (lflex != rflex) {
        flexRigid = i;
        break;
      }
    }
    if (!flexRigid && config_.flexFlexRule && !st.eqs.empty()) {
      if (st.depth >= config_.depthBudget) {
        boundReached_ = true;
        continue;
      }
      expandFlexFlex(st);
      continue;
    }
    if (!flexRigid) {
      UnifResult r;
      r.substitution = st.subst;
      for (const Eq& e : st.eqs) {
        Term l = abstractOver(e.binders, e.lhs);
        Term rr = abstractOver(e.binders, e.rhs);
        r.residual.push_back(Literal::make(l, rr, Polarity::Negative));
      }
      if (!verify(r)) throw std::logic_error("pre-unification emitted an invalid unifier");
      ++emitted_;
      return r;
    }
    if (st.depth >= config_.depthBudget) {
      boundReached_ = true;
      continue;
    }
    expand(st, *flexRigid);
  }
  exhausted_ = true;
  return std::nullopt;
}

std::vector<UnifResult> preUnify(const std::vector<Constraint>& constraints, uint32_t depthBudget,
                                 size_t maxResults, bool* boundReached) {
  UnifConfig cfg;
  cfg.depthBudget = depthBudget;
  PreUnifier u(constraints, cfg);
  std::vector<UnifResult> out;
  while (out.size() < maxResults) {
    auto r = u.next();
    if (!r) break;
    out.push_back(std::move(*r));
  }
  if (boundReached) *boundReached = u.boundReached();
  return out;
}

// ---------------------------------------------------------------------------
// Pattern unification

namespace {

struct PatEq {
  Term lhs;
  Term rhs;
};

enum class PruneResult { Done, Changed, Fail, NotPattern };

/// Ensure every loose variable of t (relative to depth k) is among `allowed`,
/// pruning arguments of flexible subterms where necessary.
PruneResult prune(Term t, uint32_t k, const std::vector<uint32_t>& allowed, VarId x, Substitution& out) {
  if (t.isAbs()) return prune(t.body(), k + 1, allowed, x, out);
  Term h = t.head();
  if (h.isFree()) {
    if (h.var() == x) return PruneResult::Fail;
    auto bvars = patternArgs(t);
    if (!bvars) return PruneResult::NotPattern;
    std::vector<size_t> keep;
    for (size_t i = 0; i < bvars->size(); ++i) {
      uint32_t b = (*bvars)[i];
      if (b < k || std::find(allowed.begin(), allowed.end(), b - k) != allowed.end()) keep.push_back(i);
    }
    if (keep.size() == bvars->size()) return PruneResult::Done;
    std::vector<Type> params = argTypes(h.type());
    const auto n = static_cast<uint32_t>(params.size());
    std::vector<Type> keptTypes;
    std::vector<Term> keptArgs;
    for (size_t i : keep) {
      keptTypes.push_back(params[i]);
      keptArgs.push_back(etaLong(mkBound(n - 1 - static_cast<uint32_t>(i), params[i])));
    }
    Term fresh = mkFreshVar(funType(keptTypes, resultType(h.type())));
    out.bind(h.var(), normalize(abstractOver(params, mkApp(fresh, keptArgs))));
    return PruneResult::Changed;
  }
  if (h.isBound() && h.index() >= k &&
      std::find(allowed.begin(), allowed.end(), h.index() - k) == allowed.end())
    return PruneResult::Fail;
  for (const Term& a : t.args()) {
    PruneResult r = prune(a, k, allowed, x, out);
    if (r != PruneResult::Done) return r;
  }
  return PruneResult::Done;
}

}  // namespace

PatternResult patternUnify(const std::vector<Constraint>& constraints) {
  std::vector<PatEq> eqs;
  for (const auto& [l, r] : constraints) {
    if (!isPatternTerm(l) || !isPatternTerm(r)) return {PatternOutcome::NotPattern, {}};
    eqs.push_back(PatEq{normalize(l), normalize(r)});
  }
  Substitution sigma;
  auto applyAll = [&](const Substitution& b) {
    sigma = b.after(sigma);
    for (PatEq& e : eqs) {
      e.lhs = substitute(e.lhs, b);
      e.rhs = substitute(e.rhs, b);
    }
  };
  while (!eqs.empty()) {
    PatEq e = eqs.back();
    eqs.pop_back();
    while (e.lhs.isAbs() && e.rhs.isAbs()) {
      e.lhs = e.lhs.body();
      e.rhs = e.rhs.body();
    }
    if (e.lhs == e.rhs) continue;
    bool lflex = e.lhs.head().isFree();
    bool rflex = e.rhs.head().isFree();
    if (!lflex && !rflex) {
      if (!sameRigidHead(e.lhs, e.rhs) || e.lhs.args().size() != e.rhs.args().size())
        return {PatternOutcome::Failed, {}};
      for (size_t k = 0; k < e.lhs.args().size(); ++k) eqs.push_back(PatEq{e.lhs.args()[k], e.rhs.args()[k]});
      continue;
    }
    if (!lflex) std::swap(e.lhs, e.rhs);
    Term x = e.lhs.head();
    auto xs = patternArgs(e.lhs);
    if (!xs) return {PatternOutcome::NotPattern, {}};
    std::vector<Type> xParams = argTypes(x.type());
    if (e.rhs.head().isFree()) {
      Term y = e.rhs.head();
      auto ys = patternArgs(e.rhs);
      if (!ys) return {PatternOutcome::NotPattern, {}};
      const auto nx = static_cast<uint32_t>(xs->size());
      Substitution b;
      if (x == y) {
        std::vector<Type> keptTypes;
        std::vector<Term> keptArgs;
        for (uint32_t i = 0; i < nx; ++i) {
          if ((*xs)[i] != (*ys)[i]) continue;
          keptTypes.push_back(xParams[i]);
          keptArgs.push_back(etaLong(mkBound(nx - 1 - i, xParams[i])));
        }
        Term h = mkFreshVar(funType(keptTypes, resultType(x.type())));
        b.bind(x.var(), normalize(abstractOver(xParams, mkApp(h, keptArgs))));
      } else {
        std::vector<Type> yParams = argTypes(y.type());
        const auto ny = static_cast<uint32_t>(ys->size());
        std::vector<Type> commonTypes;
        std::vector<Term> xArgs;
        std::vector<Term> yArgs;
        for (uint32_t i = 0; i < nx; ++i) {
          auto it = std::find(ys->begin(), ys->end(), (*xs)[i]);
          if (it == ys->end()) continue;
          auto j = static_cast<uint32_t>(it - ys->begin());
          commonTypes.push_back(xParams[i]);
          xArgs.push_back(etaLong(mkBound(nx - 1 - i, xParams[i])));
          yArgs.push_back(etaLong(mkBound(ny - 1 - j, yParams[j])));
        }
        Term h = mkFreshVar(funType(commonTypes, resultType(x.type())));
        b.bind(x.var(), normalize(abstractOver(xParams, mkApp(h, xArgs))));
        b.bind(y.var(), normalize(abstractOver(yParams, mkApp(h, yArgs))));
      }
      eqs.push_back(e);
      applyAll(b);
      continue;
    }
    Substitution pruning;
    PruneResult pr = prune(e.rhs, 0, *xs, x.var(), pruning);
    if (pr == PruneResult::Fail) return {PatternOutcome::Failed, {}};
    if (pr == PruneResult::NotPattern) return {PatternOutcome::NotPattern, {}};
    if (pr == PruneResult::Changed) {
      eqs.push_back(e);
      applyAll(pruning);
      continue;
    }
    std::vector<Type> types;
    for (const Term& a : e.lhs.args()) types.push_back(a.type());
    auto image = abstractPattern(e.rhs, *xs, types);
    if (!image) return {PatternOutcome::Failed, {}};
    Substitution b;
    b.bind(x.var(), *image);
    applyAll(b);
  }
  return {PatternOutcome::Unified, sigma};
}

}  // namespace ep
