#include "cqmq/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cqmq {

struct Expression::Node {
  Kind kind = Kind::Number;
  double number = 0.0;
  int index = 0;  // variable index or integer exponent
  Function function = Function::Sin;
  Expression lhs{nullptr};
  Expression rhs{nullptr};
};

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
}};

}  // namespace

std::string_view function_name(Function f) noexcept {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

// ---------------------------------------------------------------------------
// Construction and inspection

Expression::Expression() : Expression(number(0.0)) {}

Expression Expression::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = value;
  return Expression(std::move(n));
}

Expression Expression::imaginary_unit() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ImaginaryUnit;
  return Expression(std::move(n));
}

Expression Expression::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return Expression(std::move(n));
}

Expression Expression::variable(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expression(std::move(n));
}

Expression Expression::time() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Time;
  return Expression(std::move(n));
}

Expression Expression::call(Function f, Expression argument) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->function = f;
  n->lhs = std::move(argument);
  return Expression(std::move(n));
}

Expression Expression::power(Expression base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->index = exponent;
  n->lhs = std::move(base);
  return Expression(std::move(n));
}

Expression operator-(Expression a) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Negate;
  n->lhs = std::move(a);
  return Expression(std::move(n));
}

Expression operator+(Expression a, Expression b) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Add;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Expression(std::move(n));
}

Expression operator-(Expression a, Expression b) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Subtract;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Expression(std::move(n));
}

Expression operator*(Expression a, Expression b) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Multiply;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Expression(std::move(n));
}

Expression operator/(Expression a, Expression b) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = Expression::Kind::Divide;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return Expression(std::move(n));
}

Expression::Kind Expression::kind() const noexcept { return node_->kind; }
double Expression::number_value() const noexcept { return node_->number; }
int Expression::variable_index() const noexcept { return node_->index; }
int Expression::exponent() const noexcept { return node_->index; }
Function Expression::function() const noexcept { return node_->function; }
const Expression& Expression::lhs() const { return node_->lhs; }
const Expression& Expression::rhs() const { return node_->rhs; }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  using K = Expression::Kind;
  switch (x.kind) {
    case K::Number: return x.number == y.number;
    case K::ImaginaryUnit:
    case K::Pi:
    case K::Time: return true;
    case K::Variable: return x.index == y.index;
    case K::Negate: return x.lhs == y.lhs;
    case K::Power: return x.index == y.index && x.lhs == y.lhs;
    case K::Call: return x.function == y.function && x.lhs == y.lhs;
    default: return x.lhs == y.lhs && x.rhs == y.rhs;
  }
}

int Expression::max_variable() const {
  switch (kind()) {
    case Kind::Variable: return variable_index();
    case Kind::Number:
    case Kind::ImaginaryUnit:
    case Kind::Pi:
    case Kind::Time: return -1;
    case Kind::Negate:
    case Kind::Power:
    case Kind::Call: return lhs().max_variable();
    default: return std::max(lhs().max_variable(), rhs().max_variable());
  }
}

bool Expression::uses_time() const {
  switch (kind()) {
    case Kind::Time: return true;
    case Kind::Number:
    case Kind::ImaginaryUnit:
    case Kind::Pi:
    case Kind::Variable: return false;
    case Kind::Negate:
    case Kind::Power:
    case Kind::Call: return lhs().uses_time();
    default: return lhs().uses_time() || rhs().uses_time();
  }
}

bool Expression::uses_imaginary_unit() const {
  switch (kind()) {
    case Kind::ImaginaryUnit: return true;
    case Kind::Number:
    case Kind::Pi:
    case Kind::Time:
    case Kind::Variable: return false;
    case Kind::Negate:
    case Kind::Power:
    case Kind::Call: return lhs().uses_imaginary_unit();
    default: return lhs().uses_imaginary_unit() || rhs().uses_imaginary_unit();
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; a child printed below its required level gets parentheses.
int precedence(Expression::Kind k) {
  using K = Expression::Kind;
  switch (k) {
    case K::Add:
    case K::Subtract: return 1;
    case K::Multiply:
    case K::Divide: return 2;
    case K::Negate: return 3;
    case K::Power: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

void print(const Expression& e, int required, std::string& out) {
  using K = Expression::Kind;
  int own = precedence(e.kind());
  // Programmatic negative literals print as unary minus.
  if (e.kind() == K::Number && std::signbit(e.number_value())) own = precedence(K::Negate);
  const bool paren = own < required;
  if (paren) out += '(';
  switch (e.kind()) {
    case K::Number: out += format_number(e.number_value()); break;
    case K::ImaginaryUnit: out += 'i'; break;
    case K::Pi: out += "pi"; break;
    case K::Time: out += 't'; break;
    case K::Variable: out += 'x' + std::to_string(e.variable_index() + 1); break;
    case K::Negate:
      out += '-';
      print(e.lhs(), precedence(K::Negate), out);
      break;
    case K::Power:
      print(e.lhs(), precedence(K::Power) + 1, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
    case K::Call:
      out += function_name(e.function());
      out += '(';
      print(e.lhs(), 0, out);
      out += ')';
      break;
    default: {
      const char* op = e.kind() == K::Add        ? " + "
                       : e.kind() == K::Subtract ? " - "
                       : e.kind() == K::Multiply ? "*"
                                                 : "/";
      print(e.lhs(), own, out);
      out += op;
      print(e.rhs(), own + 1, out);
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::string Expression::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const std::vector<std::string> kOperandStart{"number", "identifier", "'('", "'-'"};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opt) : src_(src), opt_(opt) {}

  Expression run() {
    auto e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw SyntaxError(pos_, {"operator", "end of input"}, "unexpected character");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = std::move(lhs) + term();
      else if (accept('-'))
        lhs = std::move(lhs) - term();
      else
        return lhs;
    }
  }

  Expression term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = std::move(lhs) * unary();
      else if (accept('/'))
        lhs = std::move(lhs) / unary();
      else
        return lhs;
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expression power() {
    auto base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const auto at = pos_;
    auto exponent = unary();
    const auto n = integer_exponent(exponent);
    if (!n) throw SyntaxError(at, {"integer exponent"}, "exponent must be a constant integer");
    return Expression::power(std::move(base), *n);
  }

  static std::optional<int> integer_exponent(const Expression& e) {
    if (!e.is_constant() || e.uses_imaginary_unit()) return std::nullopt;
    double v = 0.0;
    try {
      v = constant_value(e).real();
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (!std::isfinite(v) || v != std::round(v) || std::abs(v) > 1024.0) return std::nullopt;
    return static_cast<int>(v);
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, kOperandStart, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      skip_ws();
      if (!accept(')')) throw SyntaxError(pos_, {"')'"}, "unbalanced parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, kOperandStart, std::string("unexpected '") + c + "'");
  }

  Expression number() {
    const auto start = pos_;
    auto digits = [&] {
      const auto s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ > s;
    };
    bool any = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) throw SyntaxError(start, {"number"}, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const auto save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (!digits()) pos_ = save;
    }
    double v = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw SyntaxError(start, {"number"}, "malformed number");
    return Expression::number(v);
  }

  Expression identifier() {
    const auto start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const auto name = src_.substr(start, pos_ - start);

    for (const auto& [fname, fn] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) throw SyntaxError(pos_, {"'('"}, "function call needs parentheses");
        auto arg = expr();
        if (!accept(')')) throw SyntaxError(pos_, {"')'"}, "unbalanced parenthesis");
        return Expression::call(fn, std::move(arg));
      }
    }
    if (name == "pi") return Expression::pi();
    if (name == "i") return Expression::imaginary_unit();
    if (name == "t" && opt_.allow_time) return Expression::time();
    if (auto it = opt_.aliases.find(name); it != opt_.aliases.end()) {
      if (it->second < 0 || it->second >= opt_.dimension)
        throw UnknownIdentifier(std::string(name), start);
      return Expression::variable(it->second);
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int k = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
      if (ec == std::errc{} && ptr == name.data() + name.size() && name[1] != '0' && k >= 1 &&
          k <= opt_.dimension)
        return Expression::variable(k - 1);
    }
    throw UnknownIdentifier(std::string(name), start);
  }

  std::string_view src_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view source, const ParseOptions& options) {
  return Parser(source, options).run();
}

// ---------------------------------------------------------------------------
// Evaluation

template <class T>
Jet<T> evaluate(const Expression& e, std::span<const Jet<T>> coordinates, const Jet<T>* time) {
  using K = Expression::Kind;
  if (coordinates.empty() && !time)
    throw std::invalid_argument("evaluate: at least one bound jet is required for its layout");
  const auto& layout = coordinates.empty() ? time->layout() : coordinates.front().layout();
  switch (e.kind()) {
    case K::Number: return Jet<T>(layout, T(e.number_value()));
    case K::Pi: return Jet<T>(layout, T(std::numbers::pi));
    case K::ImaginaryUnit:
      if constexpr (std::is_same_v<T, double>) {
        throw DomainError("imaginary unit in a real-valued expression");
      } else {
        return Jet<T>(layout, T(0.0, 1.0));
      }
    case K::Variable: {
      const auto k = static_cast<std::size_t>(e.variable_index());
      if (k >= coordinates.size())
        throw DomainError("expression uses x" + std::to_string(k + 1) + " beyond chart dimension");
      return coordinates[k];
    }
    case K::Time:
      if (!time) throw DomainError("expression uses t but no time was bound");
      return *time;
    case K::Negate: return -evaluate(e.lhs(), coordinates, time);
    case K::Add: return evaluate(e.lhs(), coordinates, time) + evaluate(e.rhs(), coordinates, time);
    case K::Subtract:
      return evaluate(e.lhs(), coordinates, time) - evaluate(e.rhs(), coordinates, time);
    case K::Multiply:
      return evaluate(e.lhs(), coordinates, time) * evaluate(e.rhs(), coordinates, time);
    case K::Divide:
      return evaluate(e.lhs(), coordinates, time) / evaluate(e.rhs(), coordinates, time);
    case K::Power: return pow(evaluate(e.lhs(), coordinates, time), e.exponent());
    case K::Call: {
      auto a = evaluate(e.lhs(), coordinates, time);
      switch (e.function()) {
        case Function::Sin: return sin(a);
        case Function::Cos: return cos(a);
        case Function::Tan: return tan(a);
        case Function::Exp: return exp(a);
        case Function::Log: return log(a);
        case Function::Sqrt: return sqrt(a);
        case Function::Sinh: return sinh(a);
        case Function::Cosh: return cosh(a);
      }
      break;
    }
  }
  throw std::logic_error("unhandled expression kind");
}

template RealJet evaluate(const Expression&, std::span<const RealJet>, const RealJet*);
template ComplexJet evaluate(const Expression&, std::span<const ComplexJet>, const ComplexJet*);

RealJet eval_jet(const Expression& e, std::span<const double> p, int order) {
  if (order < 0) throw std::invalid_argument("negative jet order");
  const int n = static_cast<int>(p.size());
  std::vector<RealJet> vars;
  vars.reserve(p.size());
  for (int k = 0; k < n; ++k)
    vars.push_back(RealJet::variable(n, order, k, p[static_cast<std::size_t>(k)]));
  const auto anchor = RealJet::constant(n, order, 0.0);
  // Time is not available to real expressions; the anchor only fixes the layout.
  if (e.uses_time()) throw DomainError("expression uses t but no time was bound");
  return evaluate<double>(e, vars, &anchor);
}

ComplexJet eval_jet_complex(const Expression& e, std::span<const double> p, int order, double t) {
  if (order < 0) throw std::invalid_argument("negative jet order");
  const int n = static_cast<int>(p.size());
  std::vector<ComplexJet> vars;
  vars.reserve(p.size());
  for (int k = 0; k < n; ++k)
    vars.push_back(ComplexJet::variable(n, order, k, p[static_cast<std::size_t>(k)]));
  const auto tj = ComplexJet::constant(n, order, t);
  return evaluate<std::complex<double>>(e, vars, &tj);
}

std::complex<double> constant_value(const Expression& e) {
  if (!e.is_constant()) throw DomainError("expression is not constant");
  const auto zero = ComplexJet::constant(0, 0, 0.0);
  return evaluate<std::complex<double>>(e, {}, &zero).value();
}

}  // namespace cqmq
