#include "pdq/literal.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pdq {

ParseError::ParseError(const std::string &what, int line, int column)
    : std::runtime_error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line_(line), column_(column) {}

std::vector<std::string> coordinate_names(int n) {
  if (n == 1)
    return {"x", "y"};
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i)
    names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    names.push_back("y" + std::to_string(i));
  return names;
}

namespace {

class Parser {
public:
  Parser(std::string_view text, int n, int order) : s_(text), n_(n), order_(order) {}

  TSeries parse() {
    TSeries v = expr();
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < pos_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  TSeries constant(const Scalar &c) const { return TSeries::constant(2 * n_, order_, c); }

  TSeries expr() {
    TSeries v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  TSeries term() {
    TSeries v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        TSeries d = unary();
        if (!d.is_constant_in_t() || !d[0].is_constant() || d[0].is_zero())
          fail("division by a non-constant or zero expression");
        v *= d[0].constant_term().inverse();
      } else {
        return v;
      }
    }
  }

  TSeries unary() {
    if (eat('-'))
      return -unary();
    if (eat('+'))
      return unary();
    return power();
  }

  TSeries power() {
    TSeries base = atom();
    if (!eat('^'))
      return base;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected a non-negative integer exponent");
    int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
    TSeries r = constant(Scalar(1));
    for (int k = 0; k < e; ++k)
      r = r * base;
    return r;
  }

  TSeries atom() {
    skip_ws();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      TSeries v = expr();
      if (!eat(')'))
        fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      mpz_class z(std::string(s_.substr(start, pos_ - start)));
      return constant(Scalar(mpq_class(z)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string id(s_.substr(start, pos_ - start));
      if (id == "t")
        return TSeries::t_power(2 * n_, order_, 1);
      if (id == "i")
        return constant(Scalar::i());
      int v = coordinate(id);
      if (v < 0) {
        pos_ = start;
        fail("unknown identifier '" + id + "'");
      }
      return TSeries::variable(2 * n_, order_, v);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  int coordinate(const std::string &id) const {
    if (n_ == 1 && id == "x")
      return 0;
    if (n_ == 1 && id == "y")
      return 1;
    if (id.size() >= 2 && (id[0] == 'x' || id[0] == 'y')) {
      for (std::size_t k = 1; k < id.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(id[k])))
          return -1;
      int idx = std::stoi(id.substr(1));
      if (idx < 1 || idx > n_)
        return -1;
      return (id[0] == 'x' ? 0 : n_) + idx - 1;
    }
    return -1;
  }

  std::string_view s_;
  int n_;
  int order_;
  std::size_t pos_ = 0;
};

std::string monomial_text(Mono m, int tpow, const std::vector<std::string> &names) {
  std::string out;
  auto factor = [&](const std::string &name, int e) {
    if (e == 0)
      return;
    if (!out.empty())
      out += "*";
    out += name;
    if (e > 1)
      out += "^" + std::to_string(e);
  };
  factor("t", tpow);
  for (std::size_t v = 0; v < names.size(); ++v)
    factor(names[v], m[static_cast<int>(v)]);
  return out;
}

void append_term(std::string &out, const Scalar &c, const std::string &mono) {
  bool negative_real = c.is_real() && sgn(c.re()) < 0;
  Scalar mag = negative_real ? -c : c;
  std::string coeff = mag.str();
  if (out.empty())
    out += negative_real ? "-" : "";
  else
    out += negative_real ? " - " : " + ";
  if (mono.empty()) {
    out += coeff;
  } else if (mag.is_one()) {
    out += mono;
  } else {
    out += coeff + "*" + mono;
  }
}

} // namespace

TSeries parse_series(std::string_view text, int n, int order) {
  return Parser(text, n, order).parse();
}

Scalar parse_scalar(std::string_view text) {
  TSeries s = Parser(text, 1, 0).parse();
  if (!s[0].is_constant())
    throw ParseError("expected a scalar literal", 1, 1);
  return s[0].constant_term();
}

std::string format_poly(const Poly &p, int n) {
  TSeries s(p, 0);
  return format_series(s, n);
}

std::string format_series(const TSeries &s, int n) {
  auto names = coordinate_names(n);
  std::string out;
  for (int k = 0; k <= s.order(); ++k) {
    std::vector<std::pair<Mono, Scalar>> terms(s[k].terms().begin(), s[k].terms().end());
    std::sort(terms.begin(), terms.end(),
              [](const auto &a, const auto &b) { return GradedLess{}(a.first, b.first); });
    for (const auto &[m, c] : terms)
      append_term(out, c, monomial_text(m, k, names));
  }
  return out.empty() ? "0" : out;
}

std::string format_form(const BaseForm &f) {
  int n = f.n();
  std::vector<std::string> dnames;
  for (const auto &nm : coordinate_names(n))
    dnames.push_back("d" + nm);
  std::ostringstream os;
  bool first = true;
  for (const auto &[w, c] : f.terms()) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << format_series(c, n) << ")";
    const char *sep = "*";
    for (int v = 0; v < 2 * n; ++v)
      if (w & (Wedge{1} << v)) {
        os << sep << dnames[v];
        sep = "^";
      }
  }
  if (first)
    return "0";
  return os.str();
}

std::string format_fiber(const FiberElement &a) {
  int n = a.n();
  auto names = coordinate_names(n);
  std::vector<std::string> hats;
  for (const auto &nm : names)
    hats.push_back(std::string(1, static_cast<char>(std::toupper(nm[0]))) + nm.substr(1));
  std::ostringstream os;
  bool first = true;
  for (const auto &[key, c] : a.terms()) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << format_poly(c, n) << ")";
    std::string mono = monomial_text(key.fiber, key.tpow, hats);
    if (!mono.empty())
      os << "*" << mono;
    const char *sep = "*";
    for (int v = 0; v < 2 * n; ++v)
      if (key.wedge & (Wedge{1} << v)) {
        os << sep << "d" << names[v];
        sep = "^";
      }
  }
  return first ? "0" : os.str();
}

} // namespace pdq
