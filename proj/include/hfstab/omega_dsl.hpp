#pragma once

// Expression language for user-supplied dispersion relations.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?        right-associative, binds tighter than unary minus
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//
// Functions: sqrt tanh sign abs sin cos exp. `pi` is a constant; every other
// identifier is a variable bound at evaluation time (`k` or a model parameter).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "hfstab/dispersion.hpp"
#include "hfstab/error.hpp"

namespace hfstab::dsl {

enum class BinOp { add, sub, mul, div, pow };
enum class Func { sqrt, tanh, sign, abs, sin, cos, exp };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  ExprPtr operand;
};
struct Binary {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Func fn;
  ExprPtr arg;
};

struct Expr {
  std::variant<Literal, Variable, Negate, Binary, Call> node;
};

inline ExprPtr make_literal(double v) { return std::make_shared<const Expr>(Expr{Literal{v}}); }
inline ExprPtr make_variable(std::string name) {
  return std::make_shared<const Expr>(Expr{Variable{std::move(name)}});
}
inline ExprPtr make_negate(ExprPtr e) { return std::make_shared<const Expr>(Expr{Negate{std::move(e)}}); }
inline ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(a), std::move(b)}});
}
inline ExprPtr make_call(Func fn, ExprPtr a) { return std::make_shared<const Expr>(Expr{Call{fn, std::move(a)}}); }

inline constexpr std::string_view func_name(Func f) {
  switch (f) {
  case Func::sqrt: return "sqrt";
  case Func::tanh: return "tanh";
  case Func::sign: return "sign";
  case Func::abs: return "abs";
  case Func::sin: return "sin";
  case Func::cos: return "cos";
  case Func::exp: return "exp";
  }
  return "?";
}

inline constexpr char op_char(BinOp op) {
  switch (op) {
  case BinOp::add: return '+';
  case BinOp::sub: return '-';
  case BinOp::mul: return '*';
  case BinOp::div: return '/';
  case BinOp::pow: return '^';
  }
  return '?';
}

namespace detail {

inline bool lookup_func(std::string_view name, Func& out) {
  static constexpr Func all[] = {Func::sqrt, Func::tanh, Func::sign, Func::abs,
                                 Func::sin,  Func::cos,  Func::exp};
  for (Func f : all)
    if (func_name(f) == name) {
      out = f;
      return true;
    }
  return false;
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("operator or end of input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::size_t start = pos_ > 8 ? pos_ - 8 : 0;
    throw ParseError(pos_, expected, std::string(text_.substr(start, 16)));
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(BinOp::add, lhs, term());
      else if (accept('-')) lhs = make_binary(BinOp::sub, lhs, term());
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(BinOp::mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(BinOp::div, lhs, unary());
      else return lhs;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_negate(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (accept('^')) return make_binary(BinOp::pow, base, unary());
    return base;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("operand");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      if (!accept(')')) fail("')'");
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        Func f;
        if (!lookup_func(name, f)) {
          pos_ = start;
          fail("known function (sqrt, tanh, sign, abs, sin, cos, exp)");
        }
        ++pos_;
        ExprPtr arg = expr();
        if (!accept(')')) fail("')'");
        return make_call(f, arg);
      }
      Func unused;
      if (lookup_func(name, unused)) fail("'(' after function name");
      return make_variable(std::string(name));
    }
    fail("operand");
  }

  ExprPtr number() {
    // Decimal literal with optional fraction and exponent; no sign (unary minus handles it).
    std::size_t start = pos_;
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) {
      pos_ = start;
      fail("number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      bool exp_digits = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        exp_digits = true;
      }
      if (!exp_digits) {
        pos_ = mark + 1;
        fail("exponent digits");
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("finite number");
    }
    return make_literal(value);
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string format_literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

/// Parses `text`; throws ParseError with the byte offset of the first problem.
inline ExprPtr parse(std::string_view text) { return detail::Parser(text).run(); }

/// Canonical form: every compound node parenthesized, literals at 17 digits.
/// Reparsing the output yields a structurally identical tree (for
/// nonnegative literals, which is all the parser ever produces).
inline std::string print(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          if (n.value < 0 || std::signbit(n.value)) return "(-" + detail::format_literal(-n.value) + ")";
          return detail::format_literal(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + print(*n.operand) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          return "(" + print(*n.lhs) + op_char(n.op) + print(*n.rhs) + ")";
        } else {
          return std::string(func_name(n.fn)) + "(" + print(*n.arg) + ")";
        }
      },
      e.node);
}

inline std::string print(const ExprPtr& e) { return print(*e); }

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        } else {
          return x.fn == y.fn && structurally_equal(*x.arg, *y.arg);
        }
      },
      a.node);
}

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Variable>) {
          if (n.name != "pi") out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_variables(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_variables(*n.lhs, out);
          collect_variables(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          collect_variables(*n.arg, out);
        }
      },
      e.node);
}

/// Names of all free variables other than the constant `pi`.
inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v))
    throw EvalError(EvalError::Kind::non_finite, std::string("non-finite result in ") + what);
  return v;
}

} // namespace detail

/// Evaluates in IEEE double precision with sign(0) = 0. Throws EvalError for
/// unbound variables, domain violations (sqrt of a negative, division by zero,
/// non-real powers) and non-finite intermediate results.
inline double evaluate(const Expr& e, double k, const ModelParams& params) {
  using detail::checked;
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          if (n.name == "k") return k;
          if (n.name == "pi") return pi;
          if (!params.contains(n.name))
            throw EvalError(EvalError::Kind::unbound_variable, "unbound variable '" + n.name + "'");
          return params.get(n.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -evaluate(*n.operand, k, params);
        } else if constexpr (std::is_same_v<T, Binary>) {
          double a = evaluate(*n.lhs, k, params);
          double b = evaluate(*n.rhs, k, params);
          switch (n.op) {
          case BinOp::add: return checked(a + b, "addition");
          case BinOp::sub: return checked(a - b, "subtraction");
          case BinOp::mul: return checked(a * b, "multiplication");
          case BinOp::div:
            if (b == 0.0) throw EvalError(EvalError::Kind::domain, "division by zero");
            return checked(a / b, "division");
          case BinOp::pow: {
            if (a == 0.0 && b < 0.0)
              throw EvalError(EvalError::Kind::domain, "division by zero in power");
            if (a < 0.0 && b != std::floor(b))
              throw EvalError(EvalError::Kind::domain, "negative base with non-integer exponent");
            return checked(std::pow(a, b), "power");
          }
          }
          return 0.0;
        } else {
          double x = evaluate(*n.arg, k, params);
          switch (n.fn) {
          case Func::sqrt:
            if (x < 0.0) throw EvalError(EvalError::Kind::domain, "sqrt of negative argument");
            return std::sqrt(x);
          case Func::tanh: return std::tanh(x);
          case Func::sign: return sign(x);
          case Func::abs: return std::abs(x);
          case Func::sin: return std::sin(x);
          case Func::cos: return std::cos(x);
          case Func::exp: return checked(std::exp(x), "exp");
          }
          return 0.0;
        }
      },
      e.node);
}

inline double evaluate(const ExprPtr& e, double k, const ModelParams& params) {
  return evaluate(*e, k, params);
}

struct OddnessReport {
  bool is_odd = true;
  double max_violation = 0.0;
};

/// Checks |ω(k) + ω(−k)| ≤ tol at every grid point. Evaluation errors propagate.
inline OddnessReport validate_oddness(const Expr& e, const ModelParams& params,
                                      const std::vector<double>& grid, double tol = 1e-10) {
  if (grid.empty()) throw ConfigError("oddness grid must be nonempty");
  OddnessReport rep;
  for (double k : grid) {
    double v = std::abs(evaluate(e, k, params) + evaluate(e, -k, params));
    rep.max_violation = std::max(rep.max_violation, v);
  }
  rep.is_odd = rep.max_violation <= tol;
  return rep;
}

/// `count` points evenly spaced on [−k_max, k_max].
inline std::vector<double> symmetric_grid(double k_max, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] = count == 1 ? 0.0 : -k_max + 2.0 * k_max * i / (count - 1);
  return g;
}

} // namespace hfstab::dsl
