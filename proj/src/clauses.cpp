#include "ep/clauses.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace ep {

Literal Literal::make(Term l, Term r, Polarity p) {
  if (l.type() != r.type()) throw TypeError("literal sides have different types");
  const Term top = mkTrue();
  if (l == top && r != top) std::swap(l, r);
  else if (r != top && l.id() < r.id()) std::swap(l, r);
  return Literal{l, r, p};
}

Literal Literal::formula(Term s, Polarity p) { return Literal::make(s, mkTrue(), p); }

bool Literal::isFormula() const { return rhs == mkTrue(); }

bool isUnificationConstraint(const Literal& l) { return l.negative(); }

bool isFlexFlex(const Literal& l) { return l.negative() && l.lhs.isFlex() && l.rhs.isFlex(); }

bool isEmptyClause(const Clause& c) {
  return std::all_of(c.literals.begin(), c.literals.end(), [](const Literal& l) { return isFlexFlex(l); });
}

uint32_t clauseWeight(const Clause& c) {
  uint32_t w = 0;
  for (const Literal& l : c.literals) w += l.weight();
  return w;
}

std::vector<Term> freeVars(const Clause& c) {
  std::vector<Term> out;
  std::unordered_set<VarId> seen;
  for (const Literal& l : c.literals) {
    collectFreeVars(l.lhs, out, seen);
    collectFreeVars(l.rhs, out, seen);
  }
  return out;
}

bool isGround(const Clause& c) {
  return std::none_of(c.literals.begin(), c.literals.end(),
                      [](const Literal& l) { return l.lhs.hasFreeVars() || l.rhs.hasFreeVars(); });
}

Clause applySubstitution(const Clause& c, const Substitution& s) {
  Clause out = c;
  if (s.empty()) return out;
  for (Literal& l : out.literals) l = Literal::make(substitute(l.lhs, s), substitute(l.rhs, s), l.polarity);
  return out;
}

Clause freshVariant(const Clause& c) {
  Substitution s;
  for (const Term& v : freeVars(c)) s.bind(v.var(), etaExpandAtom(mkFreshVar(v.type())));
  return applySubstitution(c, s);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool matchImpl(Term p, Term t, Substitution& s) {
  if (p.type() != t.type()) return false;
  if (!p.hasFreeVars()) return p == t;
  if (p.isAbs()) {
    if (!t.isAbs()) return false;
    return matchImpl(p.body(), t.body(), s);
  }
  Term h = p.head();
  if (h.isFree()) {
    std::vector<uint32_t> bvars;
    std::vector<Type> types;
    for (const Term& a : p.args()) {
      auto b = boundVarOf(a);
      if (!b || std::find(bvars.begin(), bvars.end(), *b) != bvars.end()) return false;
      bvars.push_back(*b);
      types.push_back(a.type());
    }
    if (auto bound = s.lookup(h.var())) return normalize(mkApp(*bound, p.args())) == t;
    auto image = abstractPattern(t, bvars, types);
    if (!image) return false;
    s.bind(h.var(), *image);
    return true;
  }
  if (!t.isApp() && !t.isAtom()) return false;
  if (h != t.head()) return false;
  if (p.args().size() != t.args().size()) return false;
  for (size_t i = 0; i < p.args().size(); ++i)
    if (!matchImpl(p.args()[i], t.args()[i], s)) return false;
  return true;
}

using Renaming = std::map<VarId, VarId>;

bool renamesTo(Term a, Term b, Renaming& fwd, Renaming& bwd) {
  if (a == b && !a.hasFreeVars()) return true;
  if (a.kind() != b.kind() || a.type() != b.type()) return false;
  switch (a.kind()) {
    case TermKind::Free: {
      auto f = fwd.find(a.var());
      auto g = bwd.find(b.var());
      if (f == fwd.end() && g == bwd.end()) {
        fwd[a.var()] = b.var();
        bwd[b.var()] = a.var();
        return true;
      }
      return f != fwd.end() && g != bwd.end() && f->second == b.var() && g->second == a.var();
    }
    case TermKind::Abs:
      return a.binderType() == b.binderType() && renamesTo(a.body(), b.body(), fwd, bwd);
    case TermKind::App: {
      if (a.args().size() != b.args().size() || !renamesTo(a.head(), b.head(), fwd, bwd)) return false;
      for (size_t i = 0; i < a.args().size(); ++i)
        if (!renamesTo(a.args()[i], b.args()[i], fwd, bwd)) return false;
      return true;
    }
    default:
      return a == b;
  }
}

bool renamingFrom(const Clause& c, size_t i, const Clause& d, std::vector<bool>& used, const Renaming& fwd,
                  const Renaming& bwd) {
  if (i == c.size()) return true;
  const Literal& l = c.literals[i];
  for (size_t j = 0; j < d.size(); ++j) {
    const Literal& m = d.literals[j];
    if (used[j] || m.polarity != l.polarity || m.type() != l.type()) continue;
    for (bool swap : {false, true}) {
      Renaming f = fwd, b = bwd;
      if (!renamesTo(l.lhs, swap ? m.rhs : m.lhs, f, b) || !renamesTo(l.rhs, swap ? m.lhs : m.rhs, f, b)) continue;
      used[j] = true;
      if (renamingFrom(c, i + 1, d, used, f, b)) return true;
      used[j] = false;
    }
  }
  return false;
}

bool subsumesFrom(const Clause& c, size_t i, const Clause& d, std::vector<bool>& used, const Substitution& s) {
  if (i == c.literals.size()) return true;
  const Literal& l = c.literals[i];
  for (size_t j = 0; j < d.literals.size(); ++j) {
    if (used[j]) continue;
    Substitution s1 = s;
    if (matchLiteral(l, d.literals[j], s1)) {
      used[j] = true;
      if (subsumesFrom(c, i + 1, d, used, s1)) return true;
      used[j] = false;
    }
  }
  return false;
}

}  // namespace

bool matchTerm(Term pattern, Term target, Substitution& s) {
  Substitution trial = s;
  if (!matchImpl(pattern, target, trial)) return false;
  s = std::move(trial);
  return true;
}

bool matchLiteral(const Literal& pattern, const Literal& target, Substitution& s) {
  if (pattern.polarity != target.polarity || pattern.type() != target.type()) return false;
  Substitution a = s;
  if (matchImpl(pattern.lhs, target.lhs, a) && matchImpl(pattern.rhs, target.rhs, a)) {
    s = std::move(a);
    return true;
  }
  Substitution b = s;
  if (matchImpl(pattern.lhs, target.rhs, b) && matchImpl(pattern.rhs, target.lhs, b)) {
    s = std::move(b);
    return true;
  }
  return false;
}

bool subsumes(const Clause& c, const Clause& d) {
  if (c.size() > d.size()) return false;
  std::vector<bool> used(d.size(), false);
  return subsumesFrom(c, 0, d, used, Substitution{});
}

bool isRenaming(const Clause& c, const Clause& d) {
  if (c.size() != d.size()) return false;
  std::vector<bool> used(d.size(), false);
  return renamingFrom(c, 0, d, used, {}, {});
}

bool isVariant(const Clause& c, const Clause& d) {
  return c.size() == d.size() && (isRenaming(c, d) || (subsumes(c, d) && subsumes(d, c)));
}

}  // namespace ep
