#include "martinet/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "martinet/exterior.hpp"

namespace martinet {

namespace {

struct Token {
  enum Kind { number, ident, plus, minus, star, hat, lparen, rparen, end };
  Kind kind = end;
  std::string text;
  Rational value;
  size_t pos = 0;
};

[[noreturn]] void fail(size_t pos, const std::string& what) {
  throw ParseError("parse error at " + std::to_string(pos) + ": " + what);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::string num = s.substr(i, j - i);
      std::string den = "1";
      if (j < s.size() && s[j] == '/') {
        size_t k = j + 1;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == j + 1) fail(j, "expected digits after '/'");
        den = s.substr(j + 1, k - j - 1);
        j = k;
      }
      t.kind = Token::number;
      t.value = Rational(Integer(num), Integer(den));
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      t.kind = Token::ident;
      t.text = s.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '+': t.kind = Token::plus; break;
        case '-': t.kind = Token::minus; break;
        case '*': t.kind = Token::star; break;
        case '^': t.kind = Token::hat; break;
        case '(': t.kind = Token::lparen; break;
        case ')': t.kind = Token::rparen; break;
        default: fail(i, std::string("unexpected character '") + c + "'");
      }
      ++i;
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.pos = s.size();
  out.push_back(eof);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Chart& chart)
      : toks_(std::move(tokens)), chart_(chart) {}

  DiffForm run() {
    DiffForm f = sum();
    if (peek().kind != Token::end) fail(peek().pos, "trailing input");
    return f;
  }

 private:
  const Token& peek(int ahead = 0) const {
    const size_t i = std::min(pos_ + static_cast<size_t>(ahead), toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  static TruncatedPoly scalar_of(const DiffForm& f) { return f.coeff({}); }

  DiffForm scale(const DiffForm& a, const DiffForm& b, size_t pos) const {
    if (a.degree() == 0) return scalar_of(a) * b;
    if (b.degree() == 0) return scalar_of(b) * a;
    fail(pos, "'*' needs a scalar factor; use '^' for exterior products");
  }

  DiffForm sum() {
    bool negate = false;
    if (peek().kind == Token::minus) {
      take();
      negate = true;
    }
    DiffForm acc = wedge_chain();
    if (negate) acc = -acc;
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      const bool sub = take().kind == Token::minus;
      DiffForm rhs = wedge_chain();
      acc = sub ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  DiffForm wedge_chain() {
    DiffForm acc = product();
    while (peek().kind == Token::hat) {
      take();
      acc = wedge(acc, product());
    }
    return acc;
  }

  DiffForm product() {
    DiffForm acc = atom();
    while (peek().kind == Token::star) {
      const size_t pos = take().pos;
      acc = scale(acc, atom(), pos);
    }
    return acc;
  }

  DiffForm atom() {
    const Token& t = take();
    switch (t.kind) {
      case Token::minus:
        return -atom();
      case Token::number:
        return DiffForm::from_poly(TruncatedPoly::constant(chart_, t.value, kExactJet));
      case Token::lparen: {
        DiffForm inner = sum();
        if (take().kind != Token::rparen) fail(t.pos, "unbalanced '('");
        return inner;
      }
      case Token::ident: {
        if (t.text == "d" && peek().kind == Token::lparen) {
          take();
          DiffForm inner = sum();
          if (take().kind != Token::rparen) fail(t.pos, "unbalanced '(' after d");
          return ext_d(inner);
        }
        if (auto v = chart_.index_of(t.text))
          return DiffForm::from_poly(TruncatedPoly::variable(chart_, *v, kExactJet));
        if (t.text.size() > 1 && t.text[0] == 'd') {
          if (auto v = chart_.index_of(t.text.substr(1)))
            return DiffForm::term({*v}, TruncatedPoly::constant(chart_, 1, kExactJet));
        }
        fail(t.pos, "unknown identifier '" + t.text + "'");
      }
      default:
        fail(t.pos, "expected a value");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Chart chart_;
};

// Single monomial as a '*' chain; empty for the constant monomial.
std::string monomial_text(const Chart& c, const Multi& m) {
  std::string out;
  for (size_t j = 0; j < m.size(); ++j)
    for (int e = 0; e < m[j]; ++e) {
      if (!out.empty()) out += "*";
      out += c.var(static_cast<int>(j));
    }
  return out;
}

// One parseable factor per monomial: "3/4*x*x", "-x", "2", "z".
std::string signed_monomial(const Chart& c, const Multi& m, const Rational& coef) {
  const std::string mono = monomial_text(c, m);
  Rational a = coef;
  std::string sign;
  if (a < 0) {
    sign = "-";
    a = -a;
  }
  if (mono.empty()) return sign + to_string(a);
  if (a == 1) return sign + mono;
  return sign + to_string(a) + "*" + mono;
}

// Appends " + piece" or " - piece" folding the piece's leading sign.
void join_term(std::string& out, const std::string& piece) {
  if (out.empty()) {
    out = piece;
    return;
  }
  if (!piece.empty() && piece[0] == '-')
    out += " - " + piece.substr(1);
  else
    out += " + " + piece;
}

}  // namespace

DiffForm parse_form(const std::string& text, const Chart& chart) {
  if (chart.dim() == 0) throw ParseError("parse_form: empty chart");
  return Parser(lex(text), chart).run();
}

std::string print_poly(const TruncatedPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) join_term(out, signed_monomial(p.chart(), m, c));
  return out;
}

std::string print_form(const DiffForm& w) {
  if (w.is_zero()) return "0";
  const Chart& c = w.chart();
  std::string out;
  for (const auto& [idx, poly] : w.coeffs()) {
    std::string piece;
    if (poly.terms().size() == 1) {
      const auto& [m, coef] = *poly.terms().begin();
      if (!idx.empty() && multi_degree(m) == 0 && (coef == 1 || coef == -1))
        piece = coef == 1 ? "" : "-";
      else
        piece = signed_monomial(c, m, coef);
    } else {
      piece = "(" + print_poly(poly) + ")";
    }
    for (int i : idx) {
      if (!piece.empty() && piece != "-") piece += " ^ ";
      piece += "d" + c.var(i);
    }
    join_term(out, piece);
  }
  return out;
}

namespace {

std::string strip(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

ParsedForm parse_form_source(const std::string& source) {
  std::istringstream in(source);
  std::string line;
  std::vector<std::string> names;
  std::optional<std::vector<int>> weights;
  std::string expr;
  bool chart_seen = false;
  while (std::getline(in, line)) {
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty()) continue;
    if (!chart_seen) {
      if (line.rfind("chart:", 0) != 0) throw ParseError("form source must start with 'chart:'");
      names = split_ws(line.substr(6));
      if (names.empty()) throw ParseError("'chart:' needs at least one variable");
      chart_seen = true;
      continue;
    }
    if (expr.empty() && line.rfind("weights:", 0) == 0) {
      std::vector<int> w;
      for (const std::string& tok : split_ws(line.substr(8))) {
        try {
          w.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw ParseError("bad weight '" + tok + "'");
        }
      }
      if (w.size() != names.size()) throw ParseError("one weight per chart variable required");
      weights = std::move(w);
      continue;
    }
    if (!expr.empty()) expr += " ";
    expr += line;
  }
  if (!chart_seen) throw ParseError("form source must start with 'chart:'");
  if (expr.empty()) throw ParseError("form source has no expression");
  ParsedForm out;
  out.chart = Chart(names, weights);
  out.form = parse_form(expr, out.chart);
  return out;
}

ParsedForm load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open form file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_form_source(buf.str());
}

}  // namespace martinet
