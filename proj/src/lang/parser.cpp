#include "lang/parser.hpp"

#include <cctype>
#include <sstream>

namespace hcspver {

namespace {

enum class Tok {
  End, Ident, Number,
  Assign,    // :=
  Semi, Dollar, Comma, Dot,
  LParen, RParen, LBracket, RBracket, Lt, Gt,
  Question, Bang,
  Plus, Minus, Times, Slash, Caret,
  Eq, Le, Ge, Ne,    // = <= >= (Ne unused by grammar, reported nicely)
  Amp, AmpAmp, PipePipe, Arrow, PipeGt,
  KwSkip, KwWait, KwIf, KwThen, KwElse, KwEndif, KwTrue, KwFalse, KwExists,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::Dollar: return "'$'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Question: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Times: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Eq: return "'='";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Ne: return "'!='";
    case Tok::Amp: return "'&'";
    case Tok::AmpAmp: return "'&&'";
    case Tok::PipePipe: return "'||'";
    case Tok::Arrow: return "'->'";
    case Tok::PipeGt: return "'|>'";
    case Tok::KwSkip: return "'skip'";
    case Tok::KwWait: return "'wait'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwEndif: return "'endif'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwExists: return "'exists'";
  }
  return "?";
}

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> toks;

  explicit Lexer(const std::string& s) : src(s) { run(); }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void advance(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void push(Tok k, size_t len) {
    toks.push_back({k, src.substr(pos, len), line, col});
    advance(len);
  }

  bool at(const char* s) const {
    return src.compare(pos, strlen(s), s) == 0;
  }

  void run() {
    while (pos < src.size()) {
      char c = src[pos];
      if (isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '#') { // line comment
        while (pos < src.size() && src[pos] != '\n') advance(1);
        continue;
      }
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t n = 1;
        while (pos + n < src.size() &&
               (isalnum(static_cast<unsigned char>(src[pos + n])) || src[pos + n] == '_'))
          ++n;
        std::string word = src.substr(pos, n);
        Tok k = Tok::Ident;
        if (word == "skip") k = Tok::KwSkip;
        else if (word == "wait") k = Tok::KwWait;
        else if (word == "if") k = Tok::KwIf;
        else if (word == "then") k = Tok::KwThen;
        else if (word == "else") k = Tok::KwElse;
        else if (word == "endif") k = Tok::KwEndif;
        else if (word == "true") k = Tok::KwTrue;
        else if (word == "false") k = Tok::KwFalse;
        else if (word == "exists") k = Tok::KwExists;
        push(k, n);
        continue;
      }
      if (isdigit(static_cast<unsigned char>(c))) {
        size_t n = 1;
        bool dot = false;
        while (pos + n < src.size()) {
          char d = src[pos + n];
          if (isdigit(static_cast<unsigned char>(d))) { ++n; continue; }
          if (d == '.' && !dot && pos + n + 1 < src.size() &&
              isdigit(static_cast<unsigned char>(src[pos + n + 1]))) {
            dot = true;
            ++n;
            continue;
          }
          break;
        }
        push(Tok::Number, n);
        continue;
      }
      if (at(":=")) { push(Tok::Assign, 2); continue; }
      if (at("<=")) { push(Tok::Le, 2); continue; }
      if (at(">=")) { push(Tok::Ge, 2); continue; }
      if (at("!=")) { push(Tok::Ne, 2); continue; }
      if (at("&&")) { push(Tok::AmpAmp, 2); continue; }
      if (c == '&') { push(Tok::Amp, 1); continue; }
      if (at("||")) { push(Tok::PipePipe, 2); continue; }
      if (at("|>")) { push(Tok::PipeGt, 2); continue; }
      if (at("->")) { push(Tok::Arrow, 2); continue; }
      switch (c) {
        case ';': push(Tok::Semi, 1); break;
        case '$': push(Tok::Dollar, 1); break;
        case ',': push(Tok::Comma, 1); break;
        case '.': push(Tok::Dot, 1); break;
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '[': push(Tok::LBracket, 1); break;
        case ']': push(Tok::RBracket, 1); break;
        case '<': push(Tok::Lt, 1); break;
        case '>': push(Tok::Gt, 1); break;
        case '?': push(Tok::Question, 1); break;
        case '!': push(Tok::Bang, 1); break;
        case '+': push(Tok::Plus, 1); break;
        case '-': push(Tok::Minus, 1); break;
        case '*': push(Tok::Times, 1); break;
        case '/': push(Tok::Slash, 1); break;
        case '^': push(Tok::Caret, 1); break;
        case '=': push(Tok::Eq, 1); break;
        default: fail(std::string("unexpected character '") + c + "'");
      }
    }
    toks.push_back({Tok::End, "", line, col});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t idx = 0;

  explicit Parser(const std::string& text) : toks(Lexer(text).toks) {}

  const Token& peek(size_t k = 0) const {
    return toks[std::min(idx + k, toks.size() - 1)];
  }

  [[noreturn]] void fail_expect(const std::string& what) {
    const Token& t = peek();
    throw ParseError("expected " + what + ", found " + tok_name(t.kind) +
                         (t.text.empty() ? "" : " '" + t.text + "'"),
                     t.line, t.col);
  }

  bool accept(Tok k) {
    if (peek().kind == k) {
      ++idx;
      return true;
    }
    return false;
  }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail_expect(what);
    return toks[idx++];
  }

  std::string expect_ident() { return expect(Tok::Ident, "identifier").text; }

  // --- arithmetic expressions ---

  ExprPtr parse_expr() {
    ExprPtr acc = parse_term();
    std::vector<ExprPtr> terms{acc};
    while (true) {
      if (accept(Tok::Plus)) {
        terms.push_back(parse_term());
      } else if (accept(Tok::Minus)) {
        terms.push_back(neg(parse_term()));
      } else {
        break;
      }
    }
    return addn(std::move(terms));
  }

  ExprPtr parse_term() {
    ExprPtr acc = parse_factor();
    std::vector<ExprPtr> factors{acc};
    while (true) {
      if (accept(Tok::Times)) {
        factors.push_back(parse_factor());
      } else if (accept(Tok::Slash)) {
        ExprPtr rhs = parse_factor();
        ExprPtr lhs = muln(std::move(factors));
        factors = {divide(lhs, rhs)};
      } else {
        break;
      }
    }
    return muln(std::move(factors));
  }

  ExprPtr parse_factor() {
    if (accept(Tok::Minus)) return neg(parse_factor());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (accept(Tok::Caret)) {
      bool negexp = accept(Tok::Minus);
      Token n = expect(Tok::Number, "integer exponent");
      if (n.text.find('.') != std::string::npos)
        throw ParseError("exponent must be an integer", n.line, n.col);
      long e = std::stol(n.text);
      return powi(std::move(base), negexp ? -e : e);
    }
    return base;
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++idx;
      return num(rat_parse(t.text));
    }
    if (t.kind == Tok::Ident) {
      ++idx;
      return var(t.text);
    }
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    fail_expect("expression");
  }

  // --- boolean expressions ---

  BExprPtr parse_bexpr() {
    BExprPtr a = parse_bor();
    if (accept(Tok::Arrow)) return bimp(std::move(a), parse_bexpr());
    return a;
  }

  BExprPtr parse_bor() {
    BExprPtr acc = parse_band();
    while (peek().kind == Tok::PipePipe) {
      // '||[' introduces parallel composition, not disjunction
      if (peek(1).kind == Tok::LBracket) break;
      ++idx;
      acc = bor(std::move(acc), parse_band());
    }
    return acc;
  }

  BExprPtr parse_band() {
    BExprPtr acc = parse_bnot();
    while (accept(Tok::AmpAmp)) acc = band(std::move(acc), parse_bnot());
    return acc;
  }

  BExprPtr parse_bnot() {
    if (accept(Tok::Bang)) return bnot(parse_bnot());
    return parse_batom();
  }

  BExprPtr parse_batom() {
    if (accept(Tok::KwTrue)) return btrue();
    if (accept(Tok::KwFalse)) return bfalse();
    if (peek().kind == Tok::KwExists) {
      ++idx;
      std::string v = expect_ident();
      expect(Tok::Dot, "'.'");
      return bexists(v, parse_bexpr());
    }
    // try a comparison first; fall back to a parenthesized boolean
    size_t save = idx;
    try {
      ExprPtr lhs = parse_expr();
      CmpOp op;
      switch (peek().kind) {
        case Tok::Eq: op = CmpOp::Eq; break;
        case Tok::Le: op = CmpOp::Le; break;
        case Tok::Lt: op = CmpOp::Lt; break;
        case Tok::Ge: op = CmpOp::Ge; break;
        case Tok::Gt: op = CmpOp::Gt; break;
        default: fail_expect("comparison operator");
      }
      ++idx;
      ExprPtr rhs = parse_expr();
      return cmp(op, std::move(lhs), std::move(rhs));
    } catch (const ParseError&) {
      idx = save;
    }
    if (accept(Tok::LParen)) {
      BExprPtr b = parse_bexpr();
      expect(Tok::RParen, "')'");
      return b;
    }
    fail_expect("boolean expression");
  }

  // --- processes ---

  ProcessPtr parse_pc() {
    ProcessPtr left = parse_choice();
    if (peek().kind == Tok::PipePipe && peek(1).kind == Tok::LBracket) {
      idx += 2;
      std::set<std::string> chans;
      if (peek().kind != Tok::RBracket) {
        chans.insert(expect_ident());
        while (accept(Tok::Comma)) chans.insert(expect_ident());
      }
      expect(Tok::RBracket, "']'");
      ProcessPtr right = parse_pc();
      return p_parallel(std::move(left), std::move(chans), std::move(right));
    }
    return left;
  }

  ProcessPtr parse_choice() {
    ProcessPtr acc = parse_seq();
    while (peek().kind == Tok::Dollar) {
      ++idx;
      acc = p_ichoice(std::move(acc), parse_seq());
    }
    return acc;
  }

  ProcessPtr parse_seq() {
    ProcessPtr acc = parse_prim();
    while (accept(Tok::Semi)) acc = p_seq(std::move(acc), parse_prim());
    return acc;
  }

  ProcessPtr parse_prim() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwSkip:
        ++idx;
        return p_skip();
      case Tok::KwWait:
        ++idx;
        return p_wait(parse_expr());
      case Tok::KwIf: {
        ++idx;
        BExprPtr test = parse_bexpr();
        expect(Tok::KwThen, "'then'");
        ProcessPtr a = parse_choice();
        expect(Tok::KwElse, "'else'");
        ProcessPtr b = parse_choice();
        expect(Tok::KwEndif, "'endif'");
        return p_cond(std::move(test), std::move(a), std::move(b));
      }
      case Tok::LParen: {
        ++idx;
        ProcessPtr inner = parse_choice();
        expect(Tok::RParen, "')'");
        if (accept(Tok::Times)) return p_repeat(std::move(inner));
        return inner;
      }
      case Tok::Lt:
        return parse_ode_or_interrupt();
      case Tok::Ident: {
        std::string name = t.text;
        Tok next = peek(1).kind;
        if (next == Tok::Assign) {
          idx += 2;
          return p_assign(name, parse_expr());
        }
        if (next == Tok::Question) {
          idx += 2;
          return p_input(name, expect_ident());
        }
        if (next == Tok::Bang) {
          idx += 2;
          return p_output(name, parse_expr());
        }
        fail_expect("':=', '?' or '!' after identifier");
      }
      default:
        fail_expect("process");
    }
  }

  std::vector<OdeEq> parse_ode_eqs() {
    std::vector<OdeEq> eqs;
    while (true) {
      Token id = expect(Tok::Ident, "ODE variable");
      const std::string suffix = "_dot";
      if (id.text.size() <= suffix.size() ||
          id.text.compare(id.text.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw ParseError("ODE equation must use <var>_dot", id.line, id.col);
      std::string v = id.text.substr(0, id.text.size() - suffix.size());
      expect(Tok::Eq, "'='");
      eqs.push_back({v, parse_expr()});
      if (!accept(Tok::Comma)) break;
    }
    return eqs;
  }

  ProcessPtr parse_ode_or_interrupt() {
    expect(Tok::Lt, "'<'");
    std::vector<OdeEq> eqs = parse_ode_eqs();
    expect(Tok::Amp, "'&'");
    BExprPtr domain = parse_bexpr();
    ProcessPtr tail = p_skip();
    bool has_tail = false;
    if (accept(Tok::PipeGt)) {
      tail = parse_choice();
      has_tail = true;
    }
    expect(Tok::Gt, "'>'");
    if (peek().kind == Tok::PipeGt && peek(1).kind == Tok::LBracket) {
      idx += 2;
      expect(Tok::RBracket, "']'");
      expect(Tok::LParen, "'('");
      std::vector<CommBranch> comms;
      while (true) {
        CommBranch c;
        c.chan = expect_ident();
        if (accept(Tok::Question)) {
          c.is_input = true;
          c.var = expect_ident();
        } else if (accept(Tok::Bang)) {
          c.is_input = false;
          c.expr = parse_expr();
        } else {
          fail_expect("'?' or '!'");
        }
        expect(Tok::Arrow, "'->'");
        c.cont = parse_choice();
        comms.push_back(std::move(c));
        if (!accept(Tok::Comma)) break;
      }
      expect(Tok::RParen, "')'");
      return p_interrupt(std::move(eqs), std::move(domain), std::move(tail),
                         std::move(comms));
    }
    if (has_tail)
      throw ParseError("ODE with '|>' tail requires an interrupt branch list",
                       peek().line, peek().col);
    return p_ode(std::move(eqs), std::move(domain));
  }
};

} // namespace

ProcessPtr parse_process(const std::string& text) {
  Parser p(text);
  ProcessPtr r = p.parse_pc();
  p.expect(Tok::End, "end of input");
  return r;
}

ExprPtr parse_expr(const std::string& text) {
  Parser p(text);
  ExprPtr r = p.parse_expr();
  p.expect(Tok::End, "end of input");
  return r;
}

BExprPtr parse_bexpr(const std::string& text) {
  Parser p(text);
  BExprPtr r = p.parse_bexpr();
  p.expect(Tok::End, "end of input");
  return r;
}

} // namespace hcspver
