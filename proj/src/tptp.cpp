#include "jumpcop/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace jumpcop {

namespace fs = std::filesystem;

std::string ParseDiagnostic::to_string() const {
  std::ostringstream os;
  os << file << ":" << line << ":" << column << ": " << message;
  return os.str();
}

namespace {

struct ParseError {
  ParseDiagnostic diag;
};

enum class Tok : uint8_t {
  LowerWord,
  UpperWord,
  SingleQuoted,
  Integer,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Pipe,
  Tilde,
  Equal,
  NotEqual,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  uint32_t line, col;
};

class Lexer {
 public:
  Lexer(const std::string& text, const std::string& file) : text_(text), file_(file) {}

  Token next() {
    skip_trivia();
    uint32_t line = line_, col = col_;
    if (eof()) return {Tok::End, "", line, col};
    char c = peek();
    if (c == '(') return take(Tok::LParen, line, col);
    if (c == ')') return take(Tok::RParen, line, col);
    if (c == '[') return take(Tok::LBracket, line, col);
    if (c == ']') return take(Tok::RBracket, line, col);
    if (c == ',') return take(Tok::Comma, line, col);
    if (c == '.') return take(Tok::Dot, line, col);
    if (c == '|') return take(Tok::Pipe, line, col);
    if (c == '~') return take(Tok::Tilde, line, col);
    if (c == '=') return take(Tok::Equal, line, col);
    if (c == '!') {
      advance();
      if (!eof() && peek() == '=') {
        advance();
        return {Tok::NotEqual, "!=", line, col};
      }
      fail(line, col, "unexpected '!'");
    }
    if (c == '\'') {
      advance();
      std::string out;
      while (!eof() && peek() != '\'') {
        if (peek() == '\\') {
          advance();
          if (eof()) fail(line, col, "unterminated quoted atom");
        }
        out.push_back(peek());
        advance();
      }
      if (eof()) fail(line, col, "unterminated quoted atom");
      advance();
      return {Tok::SingleQuoted, out, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      std::string out;
      if (c == '-' || c == '+') {
        out.push_back(c);
        advance();
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
          fail(line, col, "malformed number");
      }
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        out.push_back(peek());
        advance();
      }
      return {Tok::Integer, out, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::string out;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                        peek() == '$')) {
        out.push_back(peek());
        advance();
      }
      bool upper = std::isupper(static_cast<unsigned char>(out[0])) || out[0] == '_';
      return {upper ? Tok::UpperWord : Tok::LowerWord, out, line, col};
    }
    fail(line, col, std::string("unexpected character '") + c + "'");
    return {};  // unreachable
  }

  [[noreturn]] void fail(uint32_t line, uint32_t col, const std::string& msg) const {
    throw ParseError{ParseDiagnostic{file_, line, col, msg}};
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  Token take(Tok kind, uint32_t line, uint32_t col) {
    char c = peek();
    advance();
    return {kind, std::string(1, c), line, col};
  }
  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (!eof() && peek() != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        uint32_t line = line_, col = col_;
        advance();
        advance();
        while (true) {
          if (eof()) fail(line, col, "unterminated block comment");
          if (peek() == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::string file_;
  size_t pos_ = 0;
  uint32_t line_ = 1, col_ = 1;
};

class ProblemParser {
 public:
  ProblemParser(Problem& problem, std::optional<std::string> include_dir)
      : problem_(problem), include_dir_(std::move(include_dir)) {}

  void parse_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError{
          ParseDiagnostic{path.string(), 0, 0, "cannot open file"}};
    }
    fs::path canonical = fs::weakly_canonical(path);
    if (!open_files_.insert(canonical.string()).second) {
      throw ParseError{
          ParseDiagnostic{path.string(), 0, 0, "cyclic include"}};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    parse_text(text, path.string(), path.parent_path());
    open_files_.erase(canonical.string());
  }

  void parse_text(const std::string& text, const std::string& file, const fs::path& file_dir) {
    Lexer lex(text, file);
    Token t = lex.next();
    while (t.kind != Tok::End) {
      if (t.kind != Tok::LowerWord) lex.fail(t.line, t.col, "expected 'cnf' or 'include'");
      if (t.text == "cnf") {
        parse_cnf(lex);
      } else if (t.text == "include") {
        parse_include(lex, file_dir);
      } else {
        lex.fail(t.line, t.col, "unsupported input '" + t.text + "' (only cnf and include)");
      }
      t = lex.next();
    }
  }

 private:
  Token expect(Lexer& lex, Tok kind, const char* what) {
    Token t = lex.next();
    if (t.kind != kind) lex.fail(t.line, t.col, std::string("expected ") + what);
    return t;
  }

  void parse_include(Lexer& lex, const fs::path& file_dir) {
    expect(lex, Tok::LParen, "'('");
    Token name = expect(lex, Tok::SingleQuoted, "quoted file name");
    std::optional<std::set<std::string>> selection;
    Token t = lex.next();
    if (t.kind == Tok::Comma) {
      expect(lex, Tok::LBracket, "'['");
      selection.emplace();
      while (true) {
        Token n = lex.next();
        if (n.kind != Tok::LowerWord && n.kind != Tok::SingleQuoted && n.kind != Tok::Integer)
          lex.fail(n.line, n.col, "expected formula name");
        selection->insert(n.text);
        Token sep = lex.next();
        if (sep.kind == Tok::RBracket) break;
        if (sep.kind != Tok::Comma) lex.fail(sep.line, sep.col, "expected ',' or ']'");
      }
      t = lex.next();
    }
    if (t.kind != Tok::RParen) lex.fail(t.line, t.col, "expected ')'");
    expect(lex, Tok::Dot, "'.'");

    fs::path target;
    std::vector<fs::path> roots;
    if (include_dir_) roots.push_back(*include_dir_);
    roots.push_back(file_dir);
    if (const char* tptp = std::getenv("TPTP")) roots.push_back(tptp);
    for (const fs::path& root : roots) {
      fs::path cand = root / name.text;
      if (fs::exists(cand)) {
        target = cand;
        break;
      }
    }
    if (target.empty())
      lex.fail(name.line, name.col, "cannot resolve include '" + name.text + "'");

    auto saved = std::move(selection_);
    selection_ = std::move(selection);
    parse_file(target);
    selection_ = std::move(saved);
  }

  void parse_cnf(Lexer& lex) {
    expect(lex, Tok::LParen, "'('");
    Token name = lex.next();
    if (name.kind != Tok::LowerWord && name.kind != Tok::SingleQuoted && name.kind != Tok::Integer)
      lex.fail(name.line, name.col, "expected formula name");
    expect(lex, Tok::Comma, "','");
    Token role = expect(lex, Tok::LowerWord, "role");
    expect(lex, Tok::Comma, "','");

    vars_.clear();
    std::vector<LitId> literals;
    Token t = lex.next();
    bool outer_paren = false;
    if (t.kind == Tok::LParen) {
      outer_paren = true;
      t = lex.next();
    }
    while (true) {
      t = parse_literal(lex, t, literals);
      if (t.kind != Tok::Pipe) break;
      t = lex.next();
    }
    if (outer_paren) {
      if (t.kind != Tok::RParen) lex.fail(t.line, t.col, "expected ')'");
      t = lex.next();
    }
    // optional annotations: skip balanced tokens up to the closing paren
    if (t.kind == Tok::Comma) {
      int depth = 0;
      while (true) {
        t = lex.next();
        if (t.kind == Tok::End) lex.fail(t.line, t.col, "unterminated cnf annotation");
        if (t.kind == Tok::LParen || t.kind == Tok::LBracket) ++depth;
        if (t.kind == Tok::RParen || t.kind == Tok::RBracket) {
          if (t.kind == Tok::RParen && depth == 0) break;
          --depth;
        }
      }
    }
    if (t.kind != Tok::RParen) lex.fail(t.line, t.col, "expected ')'");
    expect(lex, Tok::Dot, "'.'");

    if (selection_ && !selection_->count(name.text)) return;

    ClauseRole r = ClauseRole::Other;
    if (role.text == "axiom") r = ClauseRole::Axiom;
    else if (role.text == "negated_conjecture") r = ClauseRole::NegatedConjecture;

    // drop exact duplicate literals, keeping first occurrences
    std::vector<LitId> dedup;
    for (LitId l : literals)
      if (std::find(dedup.begin(), dedup.end(), l) == dedup.end()) dedup.push_back(l);
    // tautology: L and ~L with identical arguments
    TermTable& tt = problem_.ctx.terms;
    for (size_t i = 0; i < dedup.size(); ++i)
      for (size_t j = i + 1; j < dedup.size(); ++j)
        if (tt.lit_pred(dedup[i]) == tt.lit_pred(dedup[j]) &&
            tt.lit_positive(dedup[i]) != tt.lit_positive(dedup[j]) &&
            std::equal(tt.lit_args(dedup[i]).begin(), tt.lit_args(dedup[i]).end(),
                       tt.lit_args(dedup[j]).begin()))
          return;

    problem_.clauses.push_back(
        Clause{name.text, r, std::move(dedup), static_cast<uint32_t>(vars_.size())});
  }

  // Parses one literal starting at token t; returns the token after it.
  Token parse_literal(Lexer& lex, Token t, std::vector<LitId>& out) {
    bool positive = true;
    if (t.kind == Tok::Tilde) {
      positive = false;
      t = lex.next();
    }
    auto [first, after] = parse_term_or_atom(lex, t);
    if (after.kind == Tok::Equal || after.kind == Tok::NotEqual) {
      bool neg = after.kind == Tok::NotEqual;
      Token rt = lex.next();
      auto [second, after2] = parse_term(lex, rt);
      SymbolId eq = intern_symbol(lex, after, "=", 2, SymbolKind::Predicate);
      TermId args[2] = {as_term(lex, t, first), second};
      out.push_back(problem_.ctx.terms.lit(positive != neg, eq, args));
      return after2;
    }
    // plain predicate atom
    if (!first.is_atom)
      lex.fail(t.line, t.col, "expected a predicate atom");
    out.push_back(problem_.ctx.terms.lit(positive, first.pred, first.args));
    return after;
  }

  struct Parsed {
    bool is_atom;     // parsed with a predicate head (may be reinterpreted as term)
    SymbolId pred{};  // when is_atom
    std::vector<TermId> args;
    TermId term = kNoTerm;  // when !is_atom (variable)
    std::string head;       // head word for term reinterpretation
    uint32_t line, col;
  };

  // Parses an atom-or-term whose head token is t. Predicates and functions
  // live in separate namespaces, so the decision is deferred via Parsed.
  std::pair<Parsed, Token> parse_term_or_atom(Lexer& lex, Token t) {
    if (t.kind == Tok::UpperWord) {
      Parsed p{false, 0, {}, variable(t), t.text, t.line, t.col};
      return {p, lex.next()};
    }
    if (t.kind != Tok::LowerWord && t.kind != Tok::SingleQuoted && t.kind != Tok::Integer)
      lex.fail(t.line, t.col, "expected an atom or term");
    std::string head = t.text;
    std::vector<TermId> args;
    Token after = lex.next();
    if (after.kind == Tok::LParen) {
      while (true) {
        Token at = lex.next();
        auto [arg, next] = parse_term(lex, at);
        args.push_back(arg);
        if (next.kind == Tok::RParen) break;
        if (next.kind != Tok::Comma) lex.fail(next.line, next.col, "expected ',' or ')'");
      }
      after = lex.next();
    }
    Parsed p{true, 0, std::move(args), kNoTerm, head, t.line, t.col};
    // interning deferred: predicate vs function depends on context
    if (after.kind == Tok::Equal || after.kind == Tok::NotEqual) {
      // will be used as a term
    } else {
      p.pred = intern_symbol(lex, t, head, static_cast<uint32_t>(p.args.size()),
                             SymbolKind::Predicate);
    }
    return {p, after};
  }

  std::pair<TermId, Token> parse_term(Lexer& lex, Token t) {
    if (t.kind == Tok::UpperWord) return {variable(t), lex.next()};
    if (t.kind != Tok::LowerWord && t.kind != Tok::SingleQuoted && t.kind != Tok::Integer)
      lex.fail(t.line, t.col, "expected a term");
    std::string head = t.text;
    std::vector<TermId> args;
    Token after = lex.next();
    if (after.kind == Tok::LParen) {
      while (true) {
        Token at = lex.next();
        auto [arg, next] = parse_term(lex, at);
        args.push_back(arg);
        if (next.kind == Tok::RParen) break;
        if (next.kind != Tok::Comma) lex.fail(next.line, next.col, "expected ',' or ')'");
      }
      after = lex.next();
    }
    SymbolId sym =
        intern_symbol(lex, t, head, static_cast<uint32_t>(args.size()), SymbolKind::Function);
    return {problem_.ctx.terms.app(sym, args), after};
  }

  TermId as_term(Lexer& lex, const Token& at, Parsed& p) {
    if (!p.is_atom) return p.term;
    SymbolId sym = intern_symbol(lex, at, p.head, static_cast<uint32_t>(p.args.size()),
                                 SymbolKind::Function);
    return problem_.ctx.terms.app(sym, p.args);
  }

  SymbolId intern_symbol(Lexer& lex, const Token& at, const std::string& name, uint32_t arity,
                         SymbolKind kind) {
    auto existing = problem_.ctx.symbols.find(name, kind);
    if (existing && problem_.ctx.symbols.get(*existing).arity != arity)
      lex.fail(at.line, at.col,
               "symbol '" + name + "' reused with arity " + std::to_string(arity) +
                   " (was " + std::to_string(problem_.ctx.symbols.get(*existing).arity) + ")");
    return problem_.ctx.symbols.intern(name, arity, kind);
  }

  TermId variable(const Token& t) {
    auto it = vars_.find(t.text);
    if (it == vars_.end())
      it = vars_.emplace(t.text, static_cast<uint32_t>(vars_.size())).first;
    return problem_.ctx.terms.var(kNoPos, it->second);
  }

  Problem& problem_;
  std::optional<std::string> include_dir_;
  std::optional<std::set<std::string>> selection_;
  std::set<std::string> open_files_;
  std::unordered_map<std::string, uint32_t> vars_;
};

}  // namespace

ParseResult parse_problem(const std::string& path, const std::optional<std::string>& include_dir) {
  Problem problem;
  problem.origin = path;
  try {
    ProblemParser p(problem, include_dir);
    p.parse_file(path);
  } catch (const ParseError& e) {
    return e.diag;
  }
  return problem;
}

ParseResult parse_problem_string(const std::string& text, const std::string& origin,
                                 const std::optional<std::string>& include_dir) {
  Problem problem;
  problem.origin = origin;
  try {
    ProblemParser p(problem, include_dir);
    p.parse_text(text, origin, fs::current_path());
  } catch (const ParseError& e) {
    return e.diag;
  }
  return problem;
}

std::vector<uint32_t> select_start_clauses(const Problem& problem, StartPolicy policy) {
  std::vector<uint32_t> out;
  if (policy == StartPolicy::ConjectureFirst) {
    for (uint32_t i = 0; i < problem.clauses.size(); ++i)
      if (problem.clauses[i].role == ClauseRole::NegatedConjecture) out.push_back(i);
    if (!out.empty()) return out;
  }
  out.resize(problem.clauses.size());
  for (uint32_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

namespace {

bool needs_quotes(const std::string& name) {
  if (name.empty()) return true;
  if (!std::islower(static_cast<unsigned char>(name[0]))) {
    // integers print bare
    bool digits = std::all_of(name.begin(), name.end(),
                              [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (!digits) return true;
    return false;
  }
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
  return false;
}

std::string quoted(const std::string& name) {
  if (!needs_quotes(name)) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

void print_term(const Problem& p, TermId t, std::ostream& os) {
  const TermTable& tt = p.ctx.terms;
  if (tt.is_var(t)) {
    os << "V" << tt.var_id(t).index;
    return;
  }
  os << quoted(p.ctx.symbols.get(tt.app_sym(t)).name);
  auto args = tt.app_args(t);
  if (!args.empty()) {
    os << "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) os << ",";
      print_term(p, args[i], os);
    }
    os << ")";
  }
}

}  // namespace

std::string print_problem(const Problem& problem) {
  std::ostringstream os;
  for (const Clause& c : problem.clauses) {
    const char* role = c.role == ClauseRole::Axiom ? "axiom"
                       : c.role == ClauseRole::NegatedConjecture ? "negated_conjecture"
                                                                 : "hypothesis";
    os << "cnf(" << quoted(c.name) << ", " << role << ", ";
    const TermTable& tt = problem.ctx.terms;
    for (size_t i = 0; i < c.literals.size(); ++i) {
      if (i) os << " | ";
      LitId l = c.literals[i];
      if (!tt.lit_positive(l)) os << "~";
      os << quoted(problem.ctx.symbols.get(tt.lit_pred(l)).name);
      auto args = tt.lit_args(l);
      if (!args.empty()) {
        os << "(";
        for (size_t j = 0; j < args.size(); ++j) {
          if (j) os << ",";
          print_term(problem, args[j], os);
        }
        os << ")";
      }
    }
    os << ").\n";
  }
  return os.str();
}

}  // namespace jumpcop
