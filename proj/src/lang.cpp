#include "pomsem/lang.hpp"

#include <algorithm>
#include <cctype>

namespace pomsem {

// ---- AST -------------------------------------------------------------------

CmdPtr Cmd::skip() { return std::make_shared<Cmd>(); }

CmdPtr Cmd::seq(CmdPtr a, CmdPtr b) {
  auto c = std::make_shared<Cmd>();
  c->kind_ = Kind::Seq;
  c->a_ = std::move(a);
  c->b_ = std::move(b);
  return c;
}

CmdPtr Cmd::par(CmdPtr a, CmdPtr b) {
  auto c = std::make_shared<Cmd>();
  c->kind_ = Kind::Par;
  c->a_ = std::move(a);
  c->b_ = std::move(b);
  return c;
}

CmdPtr Cmd::ite(TestTerm b, CmdPtr then_branch, CmdPtr else_branch) {
  auto c = std::make_shared<Cmd>();
  c->kind_ = Kind::If;
  c->test_ = std::make_shared<const TestTerm>(std::move(b));
  c->a_ = std::move(then_branch);
  c->b_ = std::move(else_branch);
  return c;
}

CmdPtr Cmd::loop(TestTerm b, CmdPtr body) {
  auto c = std::make_shared<Cmd>();
  c->kind_ = Kind::While;
  c->test_ = std::make_shared<const TestTerm>(std::move(b));
  c->a_ = std::move(body);
  return c;
}

CmdPtr Cmd::act(ActionTerm a) {
  if (a.kind() == ActionTerm::Kind::Assume) {
    throw std::invalid_argument("assume actions cannot appear in source programs");
  }
  auto c = std::make_shared<Cmd>();
  c->kind_ = Kind::Act;
  c->action_ = std::make_shared<const ActionTerm>(std::move(a));
  return c;
}

// ---- lexer / parser ----------------------------------------------------------

namespace {

struct Token {
  enum class Type { Ident, Number, Symbol, End } type = Type::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

std::vector<Token> tokenize(const std::string& text) {
  static const char* const symbols[] = {":=", "||", "==", "!=", "<=", ">=", "&&", "~", "(", ")", "{",
                                        "}",  ";",  "=",  "<",  ">",  "+",  "/",  "!"};
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\'')) ++j;
      t.type = Token::Type::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.type = Token::Type::Number;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* s : symbols) {
        const std::string sym = s;
        if (text.compare(i, sym.size(), sym) == 0) {
          t.type = Token::Type::Symbol;
          t.text = sym;
          advance(sym.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

bool is_keyword(const std::string& s) {
  static const char* const kws[] = {"skip", "if", "else", "while", "flip", "true", "false", "and", "or", "not"};
  return std::any_of(std::begin(kws), std::end(kws), [&](const char* k) { return s == k; });
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  CmdPtr program() {
    CmdPtr c = cmd();
    expect_end();
    return c;
  }

  TestTerm test_only() {
    TestTerm t = bexp();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(const std::string& s) const {
    return peek().type != Token::Type::End && peek().type != Token::Type::Number && peek().text == s;
  }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + found, t.line, t.column);
  }

  void expect(const std::string& s) {
    if (!at(s)) fail("expected '" + s + "'");
    take();
  }

  void expect_end() {
    if (peek().type != Token::Type::End) fail("expected end of input");
  }

  CmdPtr cmd() {
    CmdPtr lhs = seq();
    if (at("||")) {
      take();
      return Cmd::par(lhs, cmd());
    }
    return lhs;
  }

  CmdPtr seq() {
    CmdPtr lhs = atom();
    if (at(";")) {
      take();
      return Cmd::seq(lhs, seq());
    }
    return lhs;
  }

  CmdPtr block() {
    expect("{");
    CmdPtr c = cmd();
    expect("}");
    return c;
  }

  CmdPtr atom() {
    if (at("skip")) {
      take();
      return Cmd::skip();
    }
    if (at("(")) {
      take();
      CmdPtr c = cmd();
      expect(")");
      return c;
    }
    if (at("if")) {
      take();
      TestTerm b = bexp();
      CmdPtr t = block();
      expect("else");
      CmdPtr e = block();
      return Cmd::ite(b, t, e);
    }
    if (at("while")) {
      take();
      TestTerm b = bexp();
      return Cmd::loop(b, block());
    }
    if (peek().type == Token::Type::Ident && !is_keyword(peek().text)) {
      std::string var = take().text;
      if (at(":=")) {
        take();
        return Cmd::act(ActionTerm::assign(var, aexp()));
      }
      if (at("~")) {
        take();
        expect("flip");
        expect("(");
        mpq_class p = rational();
        expect(")");
        return Cmd::act(ActionTerm::flip(var, p));
      }
      fail("expected ':=' or '~' after variable '" + var + "'");
    }
    fail("expected a command");
  }

  mpq_class rational() {
    if (peek().type != Token::Type::Number) fail("expected a probability p/q");
    mpq_class num(take().text);
    mpq_class den(1);
    if (at("/")) {
      take();
      if (peek().type != Token::Type::Number) fail("expected a denominator");
      den = mpq_class(take().text);
      if (den == 0) fail("zero denominator");
    }
    mpq_class p = num / den;
    p.canonicalize();
    if (p > 1) fail("probability exceeds 1");
    return p;
  }

  ArithExpr aterm() {
    if (peek().type == Token::Type::Number) return ArithExpr::constant(std::stoi(take().text));
    if (peek().type == Token::Type::Ident && !is_keyword(peek().text)) return ArithExpr::variable(take().text);
    fail("expected a number or variable");
  }

  ArithExpr aexp() {
    ArithExpr e = aterm();
    while (at("+")) {
      take();
      e = ArithExpr::add(e, aterm());
    }
    return e;
  }

  TestTerm bexp() {
    TestTerm t = band();
    while (at("or")) {
      take();
      t = TestTerm::disj(t, band());
    }
    return t;
  }

  TestTerm band() {
    TestTerm t = bnot();
    while (at("and") || at("&&")) {
      take();
      t = TestTerm::conj(t, bnot());
    }
    return t;
  }

  TestTerm bnot() {
    if (at("not") || at("!")) {
      take();
      return TestTerm::neg(bnot());
    }
    if (at("true")) {
      take();
      return TestTerm::constant(true);
    }
    if (at("false")) {
      take();
      return TestTerm::constant(false);
    }
    if (at("(")) {
      take();
      TestTerm t = bexp();
      expect(")");
      return t;
    }
    ArithExpr lhs = aexp();
    TestTerm::Op op;
    if (at("=") || at("==")) op = TestTerm::Op::Eq;
    else if (at("!=")) op = TestTerm::Op::Ne;
    else if (at("<=")) op = TestTerm::Op::Le;
    else if (at("<")) op = TestTerm::Op::Lt;
    else if (at(">=")) op = TestTerm::Op::Ge;
    else if (at(">")) op = TestTerm::Op::Gt;
    else fail("expected a comparison operator");
    take();
    return TestTerm::compare(op, lhs, aexp());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

CmdPtr parse_program(const std::string& text) { return Parser(text).program(); }
TestTerm parse_test(const std::string& text) { return Parser(text).test_only(); }

std::string print(const CmdPtr& c) {
  auto wrap = [](const CmdPtr& x, bool paren) { return paren ? "(" + print(x) + ")" : print(x); };
  switch (c->kind()) {
    case Cmd::Kind::Skip: return "skip";
    case Cmd::Kind::Act: return c->action().to_string();
    case Cmd::Kind::Seq: {
      const auto k = c->first()->kind();
      const auto r = c->second()->kind();
      return wrap(c->first(), k == Cmd::Kind::Seq || k == Cmd::Kind::Par) + "; " +
             wrap(c->second(), r == Cmd::Kind::Par);
    }
    case Cmd::Kind::Par:
      return wrap(c->first(), c->first()->kind() == Cmd::Kind::Par) + " || " + print(c->second());
    case Cmd::Kind::If:
      return "if " + c->test().to_string() + " { " + print(c->first()) + " } else { " + print(c->second()) + " }";
    case Cmd::Kind::While: return "while " + c->test().to_string() + " { " + print(c->first()) + " }";
  }
  return {};
}

std::size_t ast_size(const CmdPtr& c) {
  switch (c->kind()) {
    case Cmd::Kind::Skip:
    case Cmd::Kind::Act: return 1;
    case Cmd::Kind::Seq:
    case Cmd::Kind::Par:
    case Cmd::Kind::If: return 1 + ast_size(c->first()) + ast_size(c->second());
    case Cmd::Kind::While: return 1 + ast_size(c->first());
  }
  return 1;
}

namespace {

template <class Pred>
bool any_node(const CmdPtr& c, Pred pred) {
  if (pred(*c)) return true;
  if (c->first() && any_node(c->first(), pred)) return true;
  return c->second() && any_node(c->second(), pred);
}

void collect_vars(const CmdPtr& c, std::vector<std::string>& out) {
  switch (c->kind()) {
    case Cmd::Kind::Act: c->action().collect_vars(out); break;
    case Cmd::Kind::If:
    case Cmd::Kind::While: c->test().collect_vars(out); break;
    default: break;
  }
  if (c->first()) collect_vars(c->first(), out);
  if (c->second()) collect_vars(c->second(), out);
}

}  // namespace

bool contains_par(const CmdPtr& c) {
  return any_node(c, [](const Cmd& x) { return x.kind() == Cmd::Kind::Par; });
}

bool contains_loop(const CmdPtr& c) {
  return any_node(c, [](const Cmd& x) { return x.kind() == Cmd::Kind::While; });
}

bool contains_flip(const CmdPtr& c) {
  return any_node(c, [](const Cmd& x) {
    return x.kind() == Cmd::Kind::Act && x.action().kind() == ActionTerm::Kind::Flip;
  });
}

std::vector<std::string> program_vars(const CmdPtr& c) {
  std::vector<std::string> out;
  collect_vars(c, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- pomset semantics ---------------------------------------------------------

Lpof denote_lpof(const CmdPtr& c, std::size_t depth, NodeSupply& supply) {
  switch (c->kind()) {
    case Cmd::Kind::Skip: return Lpof::singleton(supply.fresh(), Label::fork());
    case Cmd::Kind::Act: return Lpof::singleton(supply.fresh(), Label::action(c->action()));
    case Cmd::Kind::Seq: {
      Lpof a = denote_lpof(c->first(), depth, supply);
      Lpof b = denote_lpof(c->second(), depth, supply);
      return seq(a, b, supply);
    }
    case Cmd::Kind::Par: {
      const NodeId x = supply.fresh();
      Lpof a = denote_lpof(c->first(), depth, supply);
      Lpof b = denote_lpof(c->second(), depth, supply);
      return par(x, a, b);
    }
    case Cmd::Kind::If: {
      const NodeId x = supply.fresh();
      Lpof a = denote_lpof(c->first(), depth, supply);
      Lpof b = denote_lpof(c->second(), depth, supply);
      return guard(x, c->test(), a, b);
    }
    case Cmd::Kind::While: {
      const Lpof body = denote_lpof(c->first(), depth, supply);
      Lpof iterate = Lpof::singleton(supply.fresh(), Label::bot());
      for (std::size_t k = 0; k < depth; ++k) {
        const NodeId x = supply.fresh();
        Lpof step = seq(fresh_copy(body, supply), iterate, supply);
        Lpof done = Lpof::singleton(supply.fresh(), Label::fork());
        iterate = guard(x, c->test(), step, done);
      }
      return iterate;
    }
  }
  throw std::logic_error("unreachable");
}

Pomset denote(const CmdPtr& c, std::size_t depth) {
  NodeSupply supply;
  return Pomset(denote_lpof(c, depth, supply));
}

Pomset loop_step(const TestTerm& b, const Pomset& body, const Pomset& a) {
  return guard(b, seq(body, a), singleton(Label::fork()));
}

bool check_binary_branching(const Lpof& a) {
  Bitset test_child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.label_idx(i).is_test()) continue;
    const auto& succ = a.succ_idx(i);
    if (succ.size() != 2) return false;
    const Formula& phi = a.formula_idx(i);
    const Formula pos = phi && Formula::var(a.id_at(i));
    const Formula neg = phi && !Formula::var(a.id_at(i));
    const Formula& f1 = a.formula_idx(succ[0]);
    const Formula& f2 = a.formula_idx(succ[1]);
    if (!((equiv(f1, pos) && equiv(f2, neg)) || (equiv(f1, neg) && equiv(f2, pos)))) return false;
    for (auto j : succ) {
      if (a.pred_idx(j) != std::vector<std::size_t>{i}) return false;
      test_child.set(j);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (test_child.test(i)) continue;
    std::vector<Formula> preds;
    for (auto p : a.pred_idx(i)) preds.push_back(a.formula_idx(p));
    if (!equiv(a.formula_idx(i), Formula::conj_all(preds))) return false;
  }
  return true;
}

}  // namespace pomsem
