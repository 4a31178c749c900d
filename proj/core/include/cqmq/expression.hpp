#pragma once

// Closed-form scalar expressions over chart coordinates x1..xn (and optionally
// time t). Grammar (see docs/expression_grammar.md):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ['^' unary]          (right associative, integer exponent)
//   primary := number | 'pi' | 'i' | 't' | variable | func '(' expr ')' | '(' expr ')'

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "cqmq/jet.hpp"

namespace cqmq {

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

std::string_view function_name(Function f) noexcept;

class Expression {
 public:
  enum class Kind {
    Number,
    ImaginaryUnit,
    Pi,
    Variable,
    Time,
    Negate,
    Add,
    Subtract,
    Multiply,
    Divide,
    Power,
    Call,
  };

  /// The constant 0.
  Expression();

  static Expression number(double value);
  static Expression imaginary_unit();
  static Expression pi();
  /// Coordinate x_{index+1}; index is zero based.
  static Expression variable(int index);
  static Expression time();
  static Expression call(Function f, Expression argument);
  static Expression power(Expression base, int exponent);

  friend Expression operator-(Expression a);
  friend Expression operator+(Expression a, Expression b);
  friend Expression operator-(Expression a, Expression b);
  friend Expression operator*(Expression a, Expression b);
  friend Expression operator/(Expression a, Expression b);

  Kind kind() const noexcept;
  double number_value() const noexcept;
  int variable_index() const noexcept;
  int exponent() const noexcept;
  Function function() const noexcept;
  /// Operand of unary nodes / left operand of binary nodes.
  const Expression& lhs() const;
  const Expression& rhs() const;

  /// Structural equality.
  friend bool operator==(const Expression& a, const Expression& b);

  /// Infix text that parses back to an identical tree.
  std::string to_string() const;

  /// Highest zero-based variable index used, or -1.
  int max_variable() const;
  bool uses_time() const;
  bool uses_imaginary_unit() const;
  /// True when the tree contains no variables and no time.
  bool is_constant() const { return max_variable() < 0 && !uses_time(); }

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ParseOptions {
  /// Number of chart coordinates; x1..x{dimension} are accepted.
  int dimension = 3;
  /// Extra names for coordinates, e.g. {"theta", 0}, {"phi", 1} (zero based).
  std::map<std::string, int, std::less<>> aliases;
  bool allow_time = false;
};

/// Raises SyntaxError or UnknownIdentifier.
Expression parse(std::string_view source, const ParseOptions& options = {});

/// Evaluates with each coordinate bound to a jet (all in the same variables).
/// `time` may be null when the expression does not use t. Raises DomainError.
template <class T>
Jet<T> evaluate(const Expression& e, std::span<const Jet<T>> coordinates,
                const Jet<T>* time = nullptr);

/// Taylor expansion of a real expression at p up to `order`. Raises DomainError
/// if the expression uses the imaginary unit.
RealJet eval_jet(const Expression& e, std::span<const double> p, int order);
/// Complex-valued expansion; `t` binds the time symbol when present.
ComplexJet eval_jet_complex(const Expression& e, std::span<const double> p, int order,
                            double t = 0.0);

/// Value of a constant expression (no variables, no time).
std::complex<double> constant_value(const Expression& e);

}  // namespace cqmq
