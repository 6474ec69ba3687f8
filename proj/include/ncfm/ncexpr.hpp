#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncfm/matrix.hpp"

namespace ncfm {

// AST of a nc rational expression in d free variables. Nodes are immutable
// and shared; constants are exact scalars. Unary minus is desugared to
// ScaleLeft(-1, .) and subtraction to Add(a, ScaleLeft(-1, b)), so synthesis
// walks the same shape the scale/add/mul/inverse combinators expect.
struct NcExpr;
using ExprPtr = std::shared_ptr<const NcExpr>;

struct NcExpr {
  enum class Kind { Const, Var, Add, Mul, Inv, ScaleLeft, ScaleRight };
  Kind kind;
  Rational value;    // Const and Scale* coefficient
  int var = 0;       // Var: 0-based variable index
  ExprPtr left, right;

  static ExprPtr constant(Rational c) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::Const;
    e->value = std::move(c);
    return e;
  }
  static ExprPtr variable(int index0) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::Var;
    e->var = index0;
    return e;
  }
  static ExprPtr add(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::Add;
    e->left = std::move(a);
    e->right = std::move(b);
    return e;
  }
  static ExprPtr mul(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::Mul;
    e->left = std::move(a);
    e->right = std::move(b);
    return e;
  }
  static ExprPtr inv(ExprPtr a) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::Inv;
    e->left = std::move(a);
    return e;
  }
  static ExprPtr scale_left(Rational c, ExprPtr a) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::ScaleLeft;
    e->value = std::move(c);
    e->left = std::move(a);
    return e;
  }
  static ExprPtr scale_right(ExprPtr a, Rational c) {
    auto e = std::make_shared<NcExpr>();
    e->kind = Kind::ScaleRight;
    e->value = std::move(c);
    e->left = std::move(a);
    return e;
  }
};

inline bool struct_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case NcExpr::Kind::Const:
      return a->value == b->value;
    case NcExpr::Kind::Var:
      return a->var == b->var;
    case NcExpr::Kind::Add:
    case NcExpr::Kind::Mul:
      return struct_equal(a->left, b->left) && struct_equal(a->right, b->right);
    case NcExpr::Kind::Inv:
      return struct_equal(a->left, b->left);
    case NcExpr::Kind::ScaleLeft:
    case NcExpr::Kind::ScaleRight:
      return a->value == b->value && struct_equal(a->left, b->left);
  }
  return false;
}

inline int max_var_index(const ExprPtr& e) {
  if (!e) return 0;
  int m = e->kind == NcExpr::Kind::Var ? e->var + 1 : 0;
  if (e->left) m = std::max(m, max_var_index(e->left));
  if (e->right) m = std::max(m, max_var_index(e->right));
  return m;
}

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

// Grammar (whitespace insignificant):
//   expr   := term { ("+"|"-") term }
//   term   := factor { ["*"] factor }
//   factor := atom { "^-1" }
//   atom   := rational | "x" digits | "inv" "(" expr ")" | "(" expr ")" | "-" atom
class Parser {
 public:
  Parser(const std::string& text, int d) : text_(text), d_(d) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (eat('+')) {
        e = NcExpr::add(e, term());
      } else if (eat('-')) {
        e = NcExpr::add(e, NcExpr::scale_left(Rational(-1), term()));
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      if (eat('*')) {
        e = NcExpr::mul(e, factor());
        continue;
      }
      char c = peek();
      // Juxtaposition continues a product; '-' here belongs to expr().
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '(' || std::isalpha(static_cast<unsigned char>(c))) {
        e = NcExpr::mul(e, factor());
        continue;
      }
      return e;
    }
  }

  ExprPtr factor() {
    ExprPtr e = atom();
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        size_t at = pos_;
        ++pos_;
        if (!eat('-') || !eat('1')) throw ParseError("expected ^-1", at);
        e = NcExpr::inv(e);
      } else {
        return e;
      }
    }
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return NcExpr::scale_left(Rational(-1), atom());
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational_atom();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      std::string name;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) name += text_[pos_++];
      if (name == "inv") {
        if (!eat('(')) throw ParseError("expected '(' after inv", pos_);
        ExprPtr e = expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return NcExpr::inv(e);
      }
      if (name == "x") {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          throw ParseError("expected variable index after 'x'", pos_);
        long idx = digits();
        if (idx < 1) throw ParseError("variable index must be >= 1", start);
        if (idx > d_) throw ParseError("variable x" + std::to_string(idx) + " exceeds d=" + std::to_string(d_), start);
        return NcExpr::variable(static_cast<int>(idx - 1));
      }
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr rational_atom() {
    long num = digits();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      // only a denominator when digits follow; otherwise '/' is an error later
      size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        long den = digits();
        if (den == 0) throw ParseError("zero denominator", save);
        return NcExpr::constant(rational_of(num, den));
      }
      pos_ = save;
    }
    return NcExpr::constant(Rational(num));
  }

  long digits() {
    size_t start = pos_;
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000000L) throw ParseError("number too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected digits", start);
    return v;
  }

  const std::string& text_;
  int d_;
  size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse(const std::string& text, int d) { return detail::Parser(text, d).run(); }

inline std::string format(const ExprPtr& e);
inline std::string wrap_term(const ExprPtr& e);
inline std::string wrap_factor(const ExprPtr& e);

// Round-trips through parse() for parser-producible trees. Scale nodes whose
// coefficient is not -1 cannot appear in the grammar; they print as products.
inline std::string format(const ExprPtr& e) {
  switch (e->kind) {
    case NcExpr::Kind::Const:
      return sgn(e->value) < 0 ? "-" + to_string(Rational(-e->value)) : to_string(e->value);
    case NcExpr::Kind::Var:
      return "x" + std::to_string(e->var + 1);
    case NcExpr::Kind::Add: {
      const ExprPtr& r = e->right;
      if (r->kind == NcExpr::Kind::ScaleLeft && r->value == Rational(-1))
        return format(e->left) + " - " + wrap_term(r->left);
      return format(e->left) + " + " + wrap_term(r);
    }
    case NcExpr::Kind::Mul:
      return wrap_factor(e->left) + "*" + wrap_factor(e->right);
    case NcExpr::Kind::Inv:
      return "inv(" + format(e->left) + ")";
    case NcExpr::Kind::ScaleLeft:
      if (e->value == Rational(-1)) return "-(" + format(e->left) + ")";
      return to_string(e->value) + "*(" + format(e->left) + ")";
    case NcExpr::Kind::ScaleRight:
      return "(" + format(e->left) + ")*" + to_string(e->value);
  }
  return "";
}

inline std::string wrap_term(const ExprPtr& e) {
  std::string s = format(e);
  if (e->kind == NcExpr::Kind::Add) return "(" + s + ")";
  return s;
}

inline std::string wrap_factor(const ExprPtr& e) {
  std::string s = format(e);
  switch (e->kind) {
    case NcExpr::Kind::Add:
    case NcExpr::Kind::Mul:
    case NcExpr::Kind::ScaleLeft:
    case NcExpr::Kind::ScaleRight:
      return "(" + s + ")";
    default:
      return s;
  }
}

// Recursive evaluation on a tuple of square matrices. Empty optional means
// some inverse in the expression does not exist at this point, i.e. the
// point is outside dom_n.
template <typename K>
std::optional<Matrix<K>> eval_matrices(const ExprPtr& e, const std::vector<Matrix<K>>& x) {
  if (x.empty()) throw std::invalid_argument("eval_matrices: empty tuple");
  const int n = x[0].rows();
  for (const auto& xk : x)
    if (xk.rows() != n || xk.cols() != n) throw std::invalid_argument("eval_matrices: size mismatch");
  switch (e->kind) {
    case NcExpr::Kind::Const:
      return Matrix<K>::identity(n) * field_traits<K>::from_rational(e->value);
    case NcExpr::Kind::Var:
      if (e->var >= static_cast<int>(x.size())) throw std::invalid_argument("eval_matrices: variable out of range");
      return x[e->var];
    case NcExpr::Kind::Add: {
      auto a = eval_matrices(e->left, x), b = eval_matrices(e->right, x);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case NcExpr::Kind::Mul: {
      auto a = eval_matrices(e->left, x), b = eval_matrices(e->right, x);
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case NcExpr::Kind::Inv: {
      auto a = eval_matrices(e->left, x);
      if (!a) return std::nullopt;
      auto inv = inverse(*a);
      if (!inv) return std::nullopt;
      return *inv;
    }
    case NcExpr::Kind::ScaleLeft: {
      auto a = eval_matrices(e->left, x);
      if (!a) return std::nullopt;
      return *a * field_traits<K>::from_rational(e->value);
    }
    case NcExpr::Kind::ScaleRight: {
      auto a = eval_matrices(e->left, x);
      if (!a) return std::nullopt;
      return *a * field_traits<K>::from_rational(e->value);
    }
  }
  return std::nullopt;
}

template <typename K>
bool in_domain(const ExprPtr& e, const std::vector<Matrix<K>>& x) {
  return eval_matrices(e, x).has_value();
}

}  // namespace ncfm
