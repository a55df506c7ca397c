// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PQS_EXPRESSION_HPP
#define PQS_EXPRESSION_HPP

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqs/series.hpp"

namespace pqs
{

//
// Arithmetic expressions over complex literals and named symbols (x and the
// state variables of a model). Grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number | number 'i' | 'i' | identifier | '(' expr ')'
//
// The integer exponent may carry a sign and may be parenthesized: u^-1,
// u^(-1). The bare identifier `i` is the imaginary unit. Subtrees built only
// from literals are folded, so "(1+2i)" parses to a single literal; this is
// the canonical form that to_string() reproduces.
//
class Expression
{
public:
  enum class Kind
  {
    Literal,
    Symbol,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
  };

  Expression();  // literal 0

  static Expression literal(Complex value);
  static Expression symbol(std::string name);
  static Expression add(Expression a, Expression b);
  static Expression sub(Expression a, Expression b);
  static Expression mul(Expression a, Expression b);
  static Expression div(Expression a, Expression b);
  static Expression neg(Expression a);
  static Expression pow(Expression base, int exponent);

  Kind kind() const;
  Complex value() const;            // Literal
  const std::string &name() const;  // Symbol
  int exponent() const;             // Pow
  const Expression &lhs() const;    // binary ops, Pow base, Neg operand
  const Expression &rhs() const;    // binary ops

  bool is_literal(Complex v) const { return kind() == Kind::Literal && value() == v; }

  // Text that parses back to an identical tree.
  std::string to_string() const;

  friend bool operator==(const Expression &a, const Expression &b);

private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expression parse_expression(std::string_view text);

using Bindings = std::map<std::string, Complex, std::less<>>;

// Throws UnknownSymbol for unbound symbols and DivisionByZero for an exactly
// zero divisor or a zero base under a negative power.
Complex eval_expression(const Expression &e, const Bindings &bindings);

// Exact symbolic derivative with light simplification (0 and 1 folding).
Expression differentiate(const Expression &e, std::string_view symbol);

void collect_symbols(const Expression &e, std::set<std::string, std::less<>> &out);

//
// Stack-machine form of an expression with symbols resolved to slots. Used on
// the hot paths of the integrators.
//
class CompiledExpression
{
public:
  CompiledExpression() = default;

  // Throws UnknownSymbol if a symbol is not in `slots`.
  CompiledExpression(const Expression &e, std::span<const std::string> slots);

  Complex eval(std::span<const Complex> values) const;

  bool is_zero() const { return zero_; }

private:
  enum class Op : unsigned char
  {
    Const,
    Slot,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
  };
  struct Instr
  {
    Op op;
    int arg;  // slot index or exponent
    Complex value;
  };

  void emit(const Expression &e, std::span<const std::string> slots, int depth);

  std::vector<Instr> code_;
  int max_depth_ = 0;
  bool zero_ = true;
};

}  // namespace pqs

#endif  // PQS_EXPRESSION_HPP
