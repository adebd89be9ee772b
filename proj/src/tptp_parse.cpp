#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ep/tptp.hpp"

namespace ep {

std::string roleName(Role r) {
  switch (r) {
    case Role::Type: return "type";
    case Role::Axiom: return "axiom";
    case Role::Hypothesis: return "hypothesis";
    case Role::Definition: return "definition";
    case Role::Lemma: return "lemma";
    case Role::Theorem: return "theorem";
    case Role::Conjecture: return "conjecture";
    case Role::NegatedConjecture: return "negated_conjecture";
    case Role::Logic: return "logic";
    case Role::Plain: return "plain";
  }
  return "plain";
}

size_t Problem::conjectureCount() const {
  size_t n = 0;
  for (const auto& f : formulas) n += f.role == Role::Conjecture;
  return n;
}

bool Problem::usesModalOperators() const {
  SymbolId box = ctx().logical(Logical::Box);
  SymbolId dia = ctx().logical(Logical::Dia);
  for (const auto& f : formulas)
    if (f.formula && (containsSymbol(f.formula, box) || containsSymbol(f.formula, dia))) return true;
  return false;
}

namespace {

enum class Tok { Lower, Upper, Dollar, DDollar, Quoted, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const char* kPuncts[] = {"<=>", "<~>", "-->", ":=", "==", "!=", "=>", "<=", "~|", "~&", "!!", "??", "!>", "?*",
                         "@+", "@-", "(",  ")",  "[",  "]",  ",",  ".",  ":",  "@",  "^",  "!",  "?",  "~",
                         "|",  "&",  "=",  ">",  "*",  "+",  "{",  "}",  "#",  "<"};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpace();
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skipSpace() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '*') {
        int l = line_, cl = col_;
        advance();
        advance();
        while (i_ + 1 < s_.size() && !(s_[i_] == '*' && s_[i_ + 1] == '/')) advance();
        if (i_ + 1 >= s_.size()) throw ParseError("unterminated comment", l, cl);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  static bool isAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Token next() {
    int l = line_, cl = col_;
    char c = s_[i_];
    auto word = [&](Tok k) {
      size_t start = i_;
      while (i_ < s_.size() && isAlnum(s_[i_])) advance();
      return Token{k, std::string(s_.substr(start, i_ - start)), l, cl};
    };
    if (std::islower(static_cast<unsigned char>(c))) return word(Tok::Lower);
    if (std::isupper(static_cast<unsigned char>(c))) return word(Tok::Upper);
    if (std::isdigit(static_cast<unsigned char>(c))) return word(Tok::Number);
    if (c == '$') {
      size_t start = i_;
      advance();
      Tok k = Tok::Dollar;
      if (i_ < s_.size() && s_[i_] == '$') {
        advance();
        k = Tok::DDollar;
      }
      if (i_ >= s_.size() || !isAlnum(s_[i_])) throw ParseError("malformed defined word", l, cl);
      while (i_ < s_.size() && isAlnum(s_[i_])) advance();
      return Token{k, std::string(s_.substr(start, i_ - start)), l, cl};
    }
    if (c == '\'' || c == '"') {
      char q = c;
      advance();
      std::string text;
      while (i_ < s_.size() && s_[i_] != q) {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) advance();
        if (s_[i_] == '\n') throw ParseError("newline in quoted atom", line_, col_);
        text += s_[i_];
        advance();
      }
      if (i_ >= s_.size()) throw ParseError("unterminated quoted atom", l, cl);
      advance();
      return Token{Tok::Quoted, text, l, cl};
    }
    for (const char* p : kPuncts) {
      std::string_view pv(p);
      if (s_.substr(i_, pv.size()) == pv) {
        for (size_t k = 0; k < pv.size(); ++k) advance();
        return Token{Tok::Punct, std::string(pv), l, cl};
      }
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }

  std::string_view s_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool isBinaryConnective(const std::string& p) {
  return p == "|" || p == "&" || p == "=>" || p == "<=" || p == "<=>" || p == "<~>" || p == "~|" || p == "~&";
}

// A parsed unit that may still be a type-polymorphic constant awaiting its
// first argument (`!!`, `??`, `(=)`).
struct Parsed {
  Term term;
  Logical pending = Logical::None;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  void parseInto(Problem& p, const ParseOptions& opts, int depth);
  Term formulaOnly() {
    Term t = formula();
    expectEnd();
    return t;
  }
  Type typeOnly() {
    Type t = type();
    expectEnd();
    return t;
  }

 private:
  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool atPunct(const char* p, size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool accept(const char* p) {
    if (!atPunct(p)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg, t.line, t.col);
  }
  [[noreturn]] void unsupported(const std::string& msg) const {
    const Token& t = peek();
    throw UnsupportedInput("unsupported input: " + msg, t.line, t.col);
  }
  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'" + found());
  }
  void expectEnd() {
    if (peek().kind != Tok::End) fail("trailing input" + found());
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return " at end of input";
    return ", found '" + t.text + "'";
  }

  std::string name();
  Role role(const std::string& text);
  void typeDecl(AnnotatedFormula& f);
  LogicSpec logicSpec();
  void skipAnnotation();

  Type type();
  Type typeUnit();

  Term formula();
  Term eqTerm();
  Parsed appTerm();
  Parsed unit();
  Term quantified(const std::string& q);
  Term connectiveConstant(const std::string& op);
  Term resolve(Parsed p) {
    if (p.pending != Logical::None) fail("polymorphic constant used without argument");
    return p.term;
  }
  Term formulaOf(Term t) {
    if (t.type() != typeO()) fail("expected a formula of type $o" + where());
    return t;
  }

  template <class F>
  auto typed(F&& f) -> decltype(f()) {
    const Token& at = peek();
    try {
      return f();
    } catch (const TypeError& e) {
      throw ParseError(std::string("type error: ") + e.what() + where(), at.line, at.col);
    }
  }
  std::string where() const { return current_.empty() ? "" : " in formula '" + current_ + "'"; }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string file_;
  std::string current_;
  std::vector<std::pair<std::string, Type>> env_;
};

std::string Parser::name() {
  const Token& t = peek();
  if (t.kind == Tok::Lower || t.kind == Tok::Number || t.kind == Tok::Quoted || t.kind == Tok::Upper) {
    ++pos_;
    return t.text;
  }
  fail("expected a name" + found());
}

Role Parser::role(const std::string& r) {
  if (r == "type") return Role::Type;
  if (r == "axiom" || r == "assumption") return Role::Axiom;
  if (r == "hypothesis") return Role::Hypothesis;
  if (r == "definition") return Role::Definition;
  if (r == "lemma" || r == "corollary") return Role::Lemma;
  if (r == "theorem") return Role::Theorem;
  if (r == "conjecture") return Role::Conjecture;
  if (r == "negated_conjecture") return Role::NegatedConjecture;
  if (r == "logic") return Role::Logic;
  if (r == "plain") return Role::Plain;
  unsupported("role '" + r + "'");
}

void Parser::skipAnnotation() {
  int depth = 0;
  while (peek().kind != Tok::End) {
    if (depth == 0 && atPunct(")")) return;
    if (atPunct("(") || atPunct("[")) ++depth;
    if (atPunct(")") || atPunct("]")) --depth;
    ++pos_;
  }
}

void Parser::parseInto(Problem& p, const ParseOptions& opts, int depth) {
  while (peek().kind != Tok::End) {
    const Token kw = take();
    if (kw.kind != Tok::Lower) throw ParseError("expected an annotated formula, found '" + kw.text + "'", kw.line, kw.col);
    if (kw.text == "include") {
      expect("(");
      const Token& f = peek();
      if (f.kind != Tok::Quoted) fail("expected a quoted file name");
      std::string file = take().text;
      if (accept(",")) skipAnnotation();
      expect(")");
      expect(".");
      if (depth > 16) throw ParseError("include nesting too deep", kw.line, kw.col);
      std::filesystem::path path = file;
      std::filesystem::path root = opts.includeDir.empty() ? std::filesystem::path(".") : std::filesystem::path(opts.includeDir);
      if (path.is_relative()) {
        std::filesystem::path a = root / path;
        std::filesystem::path b = std::filesystem::path(file_).parent_path() / path;
        path = std::filesystem::exists(a) ? a : b;
      }
      std::ifstream in(path);
      if (!in) throw ParseError("cannot open include file '" + file + "'", kw.line, kw.col);
      std::stringstream buf;
      buf << in.rdbuf();
      Parser sub(Lexer(buf.str()).run(), path.string());
      sub.parseInto(p, opts, depth + 1);
      continue;
    }
    if (kw.text == "tff" || kw.text == "tcf" || kw.text == "fof" || kw.text == "cnf" || kw.text == "tpi")
      throw UnsupportedInput("unsupported input: " + kw.text + " dialect", kw.line, kw.col);
    if (kw.text != "thf") throw ParseError("unknown statement '" + kw.text + "'", kw.line, kw.col);
    expect("(");
    AnnotatedFormula af;
    af.sourceFile = file_;
    af.name = name();
    current_ = af.name;
    expect(",");
    if (peek().kind != Tok::Lower) fail("expected a role" + found());
    af.role = role(take().text);
    expect(",");
    env_.clear();
    if (af.role == Role::Type) {
      typeDecl(af);
    } else if (af.role == Role::Logic) {
      if (p.logicSpec) fail("duplicate logic specification");
      p.logicSpec = logicSpec();
    } else {
      af.formula = formulaOf(formula());
    }
    if (accept(",")) skipAnnotation();
    expect(")");
    expect(".");
    for (const auto& g : p.formulas)
      if (g.name == af.name && af.role != Role::Type && g.role != Role::Type)
        throw ParseError("duplicate formula name '" + af.name + "'", kw.line, kw.col);
    if (af.role == Role::Conjecture && p.conjectureCount() > 0)
      throw ParseError("more than one conjecture", kw.line, kw.col);
    if (af.role != Role::Logic) p.formulas.push_back(std::move(af));
    current_.clear();
  }
}

void Parser::typeDecl(AnnotatedFormula& f) {
  int parens = 0;
  while (accept("(")) ++parens;
  const Token& t = peek();
  if (t.kind != Tok::Lower && t.kind != Tok::Quoted) fail("expected a symbol name in type declaration" + found());
  f.declaredName = take().text;
  expect(":");
  if (peek().kind == Tok::Dollar && peek().text == "$tType") {
    ++pos_;
    ctx().declareBaseType(f.declaredName);
  } else {
    if (atPunct("!>")) unsupported("type quantification");
    f.declaredType = type();
    typed([&] { return ctx().declare(f.declaredName, f.declaredType); });
  }
  while (parens-- > 0) expect(")");
}

Type Parser::type() {
  Type a = typeUnit();
  if (accept(">")) return funType(a, type());
  if (atPunct("*")) unsupported("product types");
  return a;
}

Type Parser::typeUnit() {
  if (accept("(")) {
    Type t = type();
    expect(")");
    return t;
  }
  if (atPunct("!>")) unsupported("type quantification");
  const Token& t = peek();
  if (t.kind == Tok::Dollar) {
    if (t.text == "$i") return ++pos_, typeI();
    if (t.text == "$o") return ++pos_, typeO();
    if (t.text == "$tType") unsupported("type quantification over $tType");
    unsupported("type '" + t.text + "'");
  }
  if (t.kind == Tok::Lower || t.kind == Tok::Quoted) {
    if (!ctx().isBaseTypeDeclared(t.text)) fail("undeclared type '" + t.text + "'");
    ++pos_;
    return baseType(t.text);
  }
  if (t.kind == Tok::Upper) unsupported("type variables");
  fail("expected a type" + found());
}

LogicSpec Parser::logicSpec() {
  int parens = 0;
  while (accept("(")) ++parens;
  if (!(peek().kind == Tok::Dollar && peek().text == "$modal")) unsupported("logic specification other than $modal");
  ++pos_;
  if (!accept(":=") && !accept("==")) fail("expected ':='" + found());
  expect("[");
  LogicSpec spec;
  bool sawModalities = false;
  auto value = [&]() -> std::string {
    const Token& v = peek();
    if (v.kind != Tok::Dollar) {
      if (atPunct("[")) unsupported("per-symbol semantics");
      fail("expected a $-value" + found());
    }
    ++pos_;
    return v.text.substr(1);
  };
  do {
    const Token& key = peek();
    if (key.kind != Tok::Dollar) fail("expected a semantics key" + found());
    std::string k = take().text;
    if (!accept(":=") && !accept("==")) fail("expected ':='" + found());
    if (k == "$constants") {
      spec.constants = value();
      if (spec.constants != "rigid") unsupported("unsupported semantics: $constants " + spec.constants);
    } else if (k == "$quantification") {
      spec.quantification = value();
      if (spec.quantification != "constant")
        unsupported("unsupported semantics: $quantification " + spec.quantification);
    } else if (k == "$consequence") {
      std::string c = value();
      if (c == "global") spec.consequence = Consequence::Global;
      else if (c == "local") spec.consequence = Consequence::Local;
      else unsupported("unsupported semantics: $consequence " + c);
    } else if (k == "$modalities") {
      sawModalities = true;
      static const std::vector<std::string> systems = {"K", "D", "T", "B", "S4", "S5"};
      static const std::vector<std::string> schemes = {"K", "D", "T", "B", "4", "5"};
      if (accept("[")) {
        do {
          std::string a = value();
          const std::string prefix = "modal_axiom_";
          if (a.rfind(prefix, 0) != 0) unsupported("unsupported semantics: modal axiom " + a);
          a = a.substr(prefix.size());
          if (std::find(schemes.begin(), schemes.end(), a) == schemes.end())
            unsupported("unsupported semantics: modal axiom " + a);
          spec.axiomSchemes.push_back(a);
        } while (accept(","));
        expect("]");
      } else {
        std::string s = value();
        const std::string prefix = "modal_system_";
        if (s.rfind(prefix, 0) != 0) unsupported("unsupported semantics: modalities " + s);
        s = s.substr(prefix.size());
        if (std::find(systems.begin(), systems.end(), s) == systems.end())
          unsupported("unsupported semantics: modal system " + s);
        spec.system = s;
      }
    } else {
      unsupported("unsupported semantics key " + k);
    }
  } while (accept(","));
  expect("]");
  while (parens-- > 0) expect(")");
  if (!sawModalities) fail("logic specification without $modalities");
  return spec;
}

Term Parser::formula() {
  Term acc = eqTerm();
  while (peek().kind == Tok::Punct && isBinaryConnective(peek().text)) {
    std::string op = take().text;
    Term rhs = formulaOf(eqTerm());
    acc = formulaOf(acc);
    if (op == "|") acc = mkOr(acc, rhs);
    else if (op == "&") acc = mkAnd(acc, rhs);
    else if (op == "=>") acc = mkImplies(acc, rhs);
    else if (op == "<=") acc = mkImplies(rhs, acc);
    else if (op == "<=>") acc = mkEquiv(acc, rhs);
    else if (op == "<~>") acc = mkNot(mkEquiv(acc, rhs));
    else if (op == "~|") acc = mkNot(mkOr(acc, rhs));
    else acc = mkNot(mkAnd(acc, rhs));
  }
  return acc;
}

Term Parser::eqTerm() {
  Term lhs = resolve(appTerm());
  if (atPunct("=") || atPunct("!=")) {
    bool neg = take().text == "!=";
    Term rhs = resolve(appTerm());
    Term eq = typed([&] { return mkEq(lhs, rhs); });
    return neg ? mkNot(eq) : eq;
  }
  return lhs;
}

Parsed Parser::appTerm() {
  Parsed acc = unit();
  while (accept("@")) {
    Term arg = resolve(unit());
    if (acc.pending != Logical::None) {
      Logical op = acc.pending;
      Type param = arg.type();
      if (op != Logical::Eq) {
        if (!param->isFun() || param->res != typeO()) fail("quantifier constant applied to a non-predicate");
        param = param->arg;
      }
      acc = Parsed{typed([&] { return mkApp(mkConst(ctx().logical(op, param)), {arg}); })};
    } else {
      acc.term = typed([&] { return mkApp(acc.term, {arg}); });
    }
  }
  if (atPunct("@+") || atPunct("@-")) unsupported("choice and description binders");
  return acc;
}

Term Parser::connectiveConstant(const std::string& op) {
  Context& c = ctx();
  if (op == "~") return mkConst(c.logical(Logical::Not));
  if (op == "|") return mkConst(c.logical(Logical::Or));
  if (op == "&") return mkConst(c.logical(Logical::And));
  if (op == "=>") return mkConst(c.logical(Logical::Implies));
  if (op == "<=>") return mkConst(c.logical(Logical::Equiv));
  unsupported("connective constant (" + op + ")");
}

Parsed Parser::unit() {
  const Token& t = peek();
  if (t.kind == Tok::Punct) {
    if (t.text == "~") {
      if (atPunct(")", 1)) fail("unexpected ')'");
      ++pos_;
      Term a = formulaOf(resolve(unit()));
      return Parsed{mkNot(a)};
    }
    if (t.text == "(") {
      if (peek(1).kind == Tok::Punct && atPunct(")", 2)) {
        std::string op = peek(1).text;
        pos_ += 3;
        if (op == "=") return Parsed{Term(), Logical::Eq};
        return Parsed{connectiveConstant(op)};
      }
      ++pos_;
      Term f = formula();
      expect(")");
      return Parsed{f};
    }
    if (t.text == "!" || t.text == "?" || t.text == "^") {
      std::string q = take().text;
      return Parsed{quantified(q)};
    }
    if (t.text == "!!") return ++pos_, Parsed{Term(), Logical::Forall};
    if (t.text == "??") return ++pos_, Parsed{Term(), Logical::Exists};
    if (t.text == "!>" || t.text == "?*") unsupported("type quantification");
    if (t.text == "[") unsupported("tuples");
    fail("unexpected '" + t.text + "'");
  }
  switch (t.kind) {
    case Tok::Upper: {
      for (size_t i = env_.size(); i-- > 0;)
        if (env_[i].first == t.text) {
          ++pos_;
          return Parsed{mkBound(static_cast<uint32_t>(env_.size() - 1 - i), env_[i].second)};
        }
      fail("unbound variable '" + t.text + "'" + where());
    }
    case Tok::Lower:
    case Tok::Quoted: {
      auto id = ctx().lookup(t.text);
      if (!id) fail("undeclared symbol '" + t.text + "'" + where());
      ++pos_;
      return Parsed{mkConst(*id)};
    }
    case Tok::Dollar: {
      ++pos_;
      if (t.text == "$true") return Parsed{mkTrue()};
      if (t.text == "$false") return Parsed{mkFalse()};
      if (t.text == "$box") return Parsed{mkConst(ctx().logical(Logical::Box))};
      if (t.text == "$dia") return Parsed{mkConst(ctx().logical(Logical::Dia))};
      --pos_;
      unsupported("defined symbol '" + t.text + "'");
    }
    case Tok::Number:
      unsupported("arithmetic");
    case Tok::DDollar:
      unsupported("system symbol '" + t.text + "'");
    default:
      fail("unexpected end of input");
  }
}

Term Parser::quantified(const std::string& q) {
  expect("[");
  size_t pushed = 0;
  do {
    const Token& v = peek();
    if (v.kind != Tok::Upper) fail("expected a variable" + found());
    std::string n = take().text;
    Type ty = typeI();
    if (accept(":")) {
      if (peek().kind == Tok::Dollar && peek().text == "$tType") unsupported("type quantification");
      ty = type();
    }
    env_.emplace_back(n, ty);
    ++pushed;
  } while (accept(","));
  expect("]");
  expect(":");
  Term body = resolve(unit());
  if (q != "^") body = formulaOf(body);
  for (size_t k = 0; k < pushed; ++k) {
    Type ty = env_.back().second;
    env_.pop_back();
    if (q == "!") body = mkForall(ty, body);
    else if (q == "?") body = mkExists(ty, body);
    else body = mkAbs(ty, body);
  }
  return body;
}

}  // namespace

Problem parseProblem(std::string_view text, const ParseOptions& opts) {
  Problem p;
  p.name = opts.problemName;
  Parser parser(Lexer(text).run(), opts.problemName);
  parser.parseInto(p, opts, 0);
  return p;
}

Problem parseProblemFile(const std::string& path, const std::string& includeDir) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  ParseOptions opts;
  opts.problemName = std::filesystem::path(path).filename().string();
  opts.includeDir = includeDir.empty() ? std::filesystem::path(path).parent_path().string() : includeDir;
  Problem p;
  p.name = opts.problemName;
  Parser parser(Lexer(buf.str()).run(), path);
  parser.parseInto(p, opts, 0);
  return p;
}

Term parseFormula(std::string_view text) { return Parser(Lexer(text).run(), "").formulaOnly(); }

Type parseType(std::string_view text) { return Parser(Lexer(text).run(), "").typeOnly(); }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : Lexer(text).run()) {
    if (t.kind == Tok::End) break;
    out.push_back(t.kind == Tok::Quoted ? "'" + t.text + "'" : t.text);
  }
  return out;
}

}  // namespace ep
