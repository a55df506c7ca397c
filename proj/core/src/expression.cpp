// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include "pqs/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "pqs/error.hpp"

namespace pqs
{

struct Expression::Node
{
  Kind kind = Kind::Literal;
  Complex value{};
  std::string name;
  int exponent = 0;
  Expression a{nullptr};
  Expression b{nullptr};
};

namespace
{

// Integer power by repeated squaring. Throws for 0^(negative).
Complex int_pow(Complex base, int k)
{
  if (k < 0)
  {
    if (base == 0.0)
    {
      throw Error(ErrorCode::DivisionByZero, "zero raised to a negative power");
    }
    return 1.0 / int_pow(base, -k);
  }
  Complex r = 1.0;
  while (k > 0)
  {
    if (k & 1)
    {
      r *= base;
    }
    base *= base;
    k >>= 1;
  }
  return r;
}

Complex checked_div(Complex a, Complex b)
{
  if (b == 0.0)
  {
    throw Error(ErrorCode::DivisionByZero, "division by zero");
  }
  return a / b;
}

}  // namespace

Expression::Expression()
{
  static const auto zero = std::make_shared<const Node>();
  node_ = zero;
}

Expression Expression::literal(Complex value)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::symbol(std::string name)
{
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::add(Expression a, Expression b)
{
  if (a.kind() == Kind::Literal && b.kind() == Kind::Literal)
  {
    return literal(a.value() + b.value());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expression(std::move(n));
}

Expression Expression::sub(Expression a, Expression b)
{
  if (a.kind() == Kind::Literal && b.kind() == Kind::Literal)
  {
    return literal(a.value() - b.value());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sub;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expression(std::move(n));
}

Expression Expression::mul(Expression a, Expression b)
{
  if (a.kind() == Kind::Literal && b.kind() == Kind::Literal)
  {
    return literal(a.value() * b.value());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expression(std::move(n));
}

Expression Expression::div(Expression a, Expression b)
{
  if (a.kind() == Kind::Literal && b.kind() == Kind::Literal && b.value() != 0.0)
  {
    return literal(a.value() / b.value());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Div;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expression(std::move(n));
}

Expression Expression::neg(Expression a)
{
  if (a.kind() == Kind::Literal)
  {
    return literal(-a.value());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->a = std::move(a);
  return Expression(std::move(n));
}

Expression Expression::pow(Expression base, int exponent)
{
  if (base.kind() == Kind::Literal && !(base.value() == 0.0 && exponent < 0))
  {
    return literal(int_pow(base.value(), exponent));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->a = std::move(base);
  n->exponent = exponent;
  return Expression(std::move(n));
}

Expression::Kind Expression::kind() const { return node_->kind; }
Complex Expression::value() const { return node_->value; }
const std::string &Expression::name() const { return node_->name; }
int Expression::exponent() const { return node_->exponent; }
const Expression &Expression::lhs() const { return node_->a; }
const Expression &Expression::rhs() const { return node_->b; }

bool operator==(const Expression &x, const Expression &y)
{
  if (x.node_ == y.node_)
  {
    return true;
  }
  if (x.kind() != y.kind())
  {
    return false;
  }
  using K = Expression::Kind;
  switch (x.kind())
  {
    case K::Literal:
      return x.value() == y.value();
    case K::Symbol:
      return x.name() == y.name();
    case K::Neg:
      return x.lhs() == y.lhs();
    case K::Pow:
      return x.exponent() == y.exponent() && x.lhs() == y.lhs();
    default:
      return x.lhs() == y.lhs() && x.rhs() == y.rhs();
  }
}

//
// Printing
//

namespace
{

std::string format_double(double v)
{
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

std::string format_literal(Complex c)
{
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0 && !std::signbit(im))
  {
    if (re >= 0.0 && !std::signbit(re))
    {
      return format_double(re);
    }
    return "(" + format_double(re) + ")";
  }
  std::string s = "(";
  if (re != 0.0 || std::signbit(re))
  {
    s += format_double(re);
    s += std::signbit(im) ? "-" : "+";
    s += format_double(std::abs(im));
  }
  else
  {
    s += std::signbit(im) ? "-" : "";
    s += format_double(std::abs(im));
  }
  s += "i)";
  return s;
}

int precedence(const Expression &e)
{
  using K = Expression::Kind;
  switch (e.kind())
  {
    case K::Add:
    case K::Sub:
      return 1;
    case K::Mul:
    case K::Div:
      return 2;
    case K::Neg:
      return 3;
    case K::Pow:
      return 4;
    default:
      return 5;
  }
}

void print(const Expression &e, std::string &out);

void print_child(const Expression &e, int min_prec, std::string &out)
{
  if (precedence(e) < min_prec)
  {
    out += '(';
    print(e, out);
    out += ')';
  }
  else
  {
    print(e, out);
  }
}

void print(const Expression &e, std::string &out)
{
  using K = Expression::Kind;
  switch (e.kind())
  {
    case K::Literal:
      out += format_literal(e.value());
      return;
    case K::Symbol:
      out += e.name();
      return;
    case K::Neg:
      out += '-';
      print_child(e.lhs(), 3, out);
      return;
    case K::Pow:
      print_child(e.lhs(), 5, out);
      out += '^';
      if (e.exponent() < 0)
      {
        out += "(" + std::to_string(e.exponent()) + ")";
      }
      else
      {
        out += std::to_string(e.exponent());
      }
      return;
    default:
      break;
  }
  const int p = precedence(e);
  const char op = e.kind() == K::Add ? '+' : e.kind() == K::Sub ? '-' : e.kind() == K::Mul ? '*' : '/';
  print_child(e.lhs(), p, out);
  out += op;
  print_child(e.rhs(), p + 1, out);
}

}  // namespace

std::string Expression::to_string() const
{
  std::string out;
  print(*this, out);
  return out;
}

//
// Parsing
//

namespace
{

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser
{
public:
  explicit Parser(std::string_view text) : text_(normalize(text)) {}

  Expression parse()
  {
    skip_ws();
    if (pos_ >= text_.size())
    {
      fail("empty expression");
    }
    Expression e = parse_expr();
    skip_ws();
    if (pos_ < text_.size())
    {
      fail(std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

private:
  // U+2212 MINUS SIGN is accepted as '-'. Positions refer to the normalized
  // text, which differs from the input only after such a character.
  static std::string normalize(std::string_view in)
  {
    std::string out;
    out.reserve(in.size());
    for (std::size_t k = 0; k < in.size(); ++k)
    {
      if (k + 2 < in.size() && static_cast<unsigned char>(in[k]) == 0xE2 &&
          static_cast<unsigned char>(in[k + 1]) == 0x88 && static_cast<unsigned char>(in[k + 2]) == 0x92)
      {
        out += '-';
        k += 2;
      }
      else
      {
        out += in[k];
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string &what) const
  {
    throw Error(ErrorCode::SyntaxError, "at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
    {
      ++pos_;
    }
  }

  bool accept(char c)
  {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression parse_expr()
  {
    Expression e = parse_term();
    for (;;)
    {
      if (accept('+'))
      {
        e = Expression::add(e, parse_term());
      }
      else if (accept('-'))
      {
        e = Expression::sub(e, parse_term());
      }
      else
      {
        return e;
      }
    }
  }

  Expression parse_term()
  {
    Expression e = parse_unary();
    for (;;)
    {
      if (accept('*'))
      {
        e = Expression::mul(e, parse_unary());
      }
      else if (accept('/'))
      {
        e = Expression::div(e, parse_unary());
      }
      else
      {
        return e;
      }
    }
  }

  Expression parse_unary()
  {
    if (accept('-'))
    {
      return Expression::neg(parse_unary());
    }
    if (accept('+'))
    {
      return parse_unary();
    }
    return parse_power();
  }

  Expression parse_power()
  {
    Expression base = parse_primary();
    if (accept('^'))
    {
      return Expression::pow(base, parse_exponent());
    }
    return base;
  }

  int parse_exponent()
  {
    const bool paren = accept('(');
    int sign = 1;
    if (accept('-'))
    {
      sign = -1;
    }
    else
    {
      accept('+');
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
    {
      ++pos_;
    }
    if (start == pos_)
    {
      fail("expected integer exponent");
    }
    int k = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
    if (ec != std::errc())
    {
      pos_ = start;
      fail("exponent out of range");
    }
    if (paren && !accept(')'))
    {
      fail("expected ')' after exponent");
    }
    return sign * k;
  }

  Expression parse_primary()
  {
    skip_ws();
    if (pos_ >= text_.size())
    {
      fail("unexpected end of expression");
    }
    const char c = text_[pos_];
    if (c == '(')
    {
      ++pos_;
      Expression e = parse_expr();
      if (!accept(')'))
      {
        fail("expected ')'");
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
    {
      return parse_number();
    }
    if (is_ident_start(c))
    {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_]))
      {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (name == "i")
      {
        return Expression::literal(Complex(0.0, 1.0));
      }
      return Expression::symbol(std::move(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expression parse_number()
  {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < text_.size() && text_[pos_] == '.')
    {
      ++pos_;
      nd += digits();
    }
    if (nd == 0)
    {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E'))
    {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
      {
        ++look;
      }
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look])))
      {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(v))
    {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() || !is_ident_char(text_[pos_ + 1])))
    {
      ++pos_;
      return Expression::literal(Complex(0.0, v));
    }
    if (pos_ < text_.size() && is_ident_start(text_[pos_]))
    {
      fail("identifier directly after number (use '*')");
    }
    return Expression::literal(Complex(v, 0.0));
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text).parse(); }

//
// Evaluation and differentiation
//

Complex eval_expression(const Expression &e, const Bindings &bindings)
{
  using K = Expression::Kind;
  switch (e.kind())
  {
    case K::Literal:
      return e.value();
    case K::Symbol:
    {
      auto it = bindings.find(e.name());
      if (it == bindings.end())
      {
        throw Error(ErrorCode::UnknownSymbol, "unbound symbol '" + e.name() + "'");
      }
      return it->second;
    }
    case K::Add:
      return eval_expression(e.lhs(), bindings) + eval_expression(e.rhs(), bindings);
    case K::Sub:
      return eval_expression(e.lhs(), bindings) - eval_expression(e.rhs(), bindings);
    case K::Mul:
      return eval_expression(e.lhs(), bindings) * eval_expression(e.rhs(), bindings);
    case K::Div:
      return checked_div(eval_expression(e.lhs(), bindings), eval_expression(e.rhs(), bindings));
    case K::Neg:
      return -eval_expression(e.lhs(), bindings);
    case K::Pow:
      return int_pow(eval_expression(e.lhs(), bindings), e.exponent());
  }
  return 0.0;
}

namespace
{

bool is_zero(const Expression &e) { return e.is_literal(0.0); }
bool is_one(const Expression &e) { return e.is_literal(1.0); }

Expression s_add(const Expression &a, const Expression &b)
{
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return Expression::add(a, b);
}

Expression s_sub(const Expression &a, const Expression &b)
{
  if (is_zero(b)) return a;
  if (is_zero(a)) return Expression::neg(b);
  return Expression::sub(a, b);
}

Expression s_mul(const Expression &a, const Expression &b)
{
  if (is_zero(a) || is_zero(b)) return Expression::literal(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return Expression::mul(a, b);
}

Expression s_div(const Expression &a, const Expression &b)
{
  if (is_zero(a)) return Expression::literal(0.0);
  if (is_one(b)) return a;
  return Expression::div(a, b);
}

Expression s_pow(const Expression &a, int k)
{
  if (k == 0) return Expression::literal(1.0);
  if (k == 1) return a;
  return Expression::pow(a, k);
}

}  // namespace

Expression differentiate(const Expression &e, std::string_view symbol)
{
  using K = Expression::Kind;
  switch (e.kind())
  {
    case K::Literal:
      return Expression::literal(0.0);
    case K::Symbol:
      return Expression::literal(e.name() == symbol ? 1.0 : 0.0);
    case K::Add:
      return s_add(differentiate(e.lhs(), symbol), differentiate(e.rhs(), symbol));
    case K::Sub:
      return s_sub(differentiate(e.lhs(), symbol), differentiate(e.rhs(), symbol));
    case K::Mul:
      return s_add(s_mul(differentiate(e.lhs(), symbol), e.rhs()),
                   s_mul(e.lhs(), differentiate(e.rhs(), symbol)));
    case K::Div:
    {
      const Expression da = differentiate(e.lhs(), symbol);
      const Expression db = differentiate(e.rhs(), symbol);
      if (is_zero(db))
      {
        return s_div(da, e.rhs());
      }
      return s_div(s_sub(s_mul(da, e.rhs()), s_mul(e.lhs(), db)), s_pow(e.rhs(), 2));
    }
    case K::Neg:
    {
      const Expression d = differentiate(e.lhs(), symbol);
      return is_zero(d) ? d : Expression::neg(d);
    }
    case K::Pow:
    {
      const int k = e.exponent();
      const Expression d = differentiate(e.lhs(), symbol);
      if (k == 0 || is_zero(d))
      {
        return Expression::literal(0.0);
      }
      return s_mul(s_mul(Expression::literal(static_cast<double>(k)), s_pow(e.lhs(), k - 1)), d);
    }
  }
  return Expression::literal(0.0);
}

void collect_symbols(const Expression &e, std::set<std::string, std::less<>> &out)
{
  using K = Expression::Kind;
  switch (e.kind())
  {
    case K::Literal:
      return;
    case K::Symbol:
      out.insert(e.name());
      return;
    case K::Neg:
    case K::Pow:
      collect_symbols(e.lhs(), out);
      return;
    default:
      collect_symbols(e.lhs(), out);
      collect_symbols(e.rhs(), out);
  }
}

//
// CompiledExpression
//

CompiledExpression::CompiledExpression(const Expression &e, std::span<const std::string> slots)
{
  zero_ = e.is_literal(0.0);
  emit(e, slots, 1);
}

void CompiledExpression::emit(const Expression &e, std::span<const std::string> slots, int depth)
{
  using K = Expression::Kind;
  max_depth_ = std::max(max_depth_, depth);
  switch (e.kind())
  {
    case K::Literal:
      code_.push_back({Op::Const, 0, e.value()});
      return;
    case K::Symbol:
    {
      auto it = std::find(slots.begin(), slots.end(), e.name());
      if (it == slots.end())
      {
        throw Error(ErrorCode::UnknownSymbol, "undeclared symbol '" + e.name() + "'");
      }
      code_.push_back({Op::Slot, static_cast<int>(it - slots.begin()), {}});
      return;
    }
    case K::Neg:
      emit(e.lhs(), slots, depth);
      code_.push_back({Op::Neg, 0, {}});
      return;
    case K::Pow:
      emit(e.lhs(), slots, depth);
      code_.push_back({Op::Pow, e.exponent(), {}});
      return;
    default:
      break;
  }
  emit(e.lhs(), slots, depth);
  emit(e.rhs(), slots, depth + 1);
  const Op op = e.kind() == K::Add ? Op::Add : e.kind() == K::Sub ? Op::Sub : e.kind() == K::Mul ? Op::Mul : Op::Div;
  code_.push_back({op, 0, {}});
}

Complex CompiledExpression::eval(std::span<const Complex> values) const
{
  if (code_.empty())
  {
    return 0.0;
  }
  constexpr int kInline = 32;
  std::array<Complex, kInline> inline_stack;
  std::vector<Complex> heap_stack;
  Complex *stack = inline_stack.data();
  if (max_depth_ > kInline)
  {
    heap_stack.resize(static_cast<std::size_t>(max_depth_));
    stack = heap_stack.data();
  }
  int top = -1;
  for (const Instr &in : code_)
  {
    switch (in.op)
    {
      case Op::Const:
        stack[++top] = in.value;
        break;
      case Op::Slot:
        stack[++top] = values[static_cast<std::size_t>(in.arg)];
        break;
      case Op::Add:
        stack[top - 1] += stack[top];
        --top;
        break;
      case Op::Sub:
        stack[top - 1] -= stack[top];
        --top;
        break;
      case Op::Mul:
        stack[top - 1] *= stack[top];
        --top;
        break;
      case Op::Div:
        stack[top - 1] = checked_div(stack[top - 1], stack[top]);
        --top;
        break;
      case Op::Neg:
        stack[top] = -stack[top];
        break;
      case Op::Pow:
        stack[top] = int_pow(stack[top], in.arg);
        break;
    }
  }
  return stack[0];
}

}  // namespace pqs
