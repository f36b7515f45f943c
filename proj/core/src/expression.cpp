#include "zermelo/expression.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace zermelo {

namespace {

enum class Op { kConst, kVarT, kVarX, kVarY, kAdd, kSub, kMul, kDiv, kNeg, kSin, kCos, kArctan };

}  // namespace

struct Expression::Node {
  Op op = Op::kConst;
  double value = 0.0;  // kConst only
  std::shared_ptr<const Node> a, b;

  FieldEval eval(double t, double x, double y) const {
    switch (op) {
      case Op::kConst:
        return {value, 0.0, 0.0, 0.0};
      case Op::kVarT:
        return {t, 1.0, 0.0, 0.0};
      case Op::kVarX:
        return {x, 0.0, 1.0, 0.0};
      case Op::kVarY:
        return {y, 0.0, 0.0, 1.0};
      default:
        break;
    }
    const FieldEval ea = a->eval(t, x, y);
    switch (op) {
      case Op::kNeg:
        return {-ea.v, -ea.dt, -ea.dx, -ea.dy};
      case Op::kSin: {
        const double c = std::cos(ea.v);
        return {std::sin(ea.v), c * ea.dt, c * ea.dx, c * ea.dy};
      }
      case Op::kCos: {
        const double s = -std::sin(ea.v);
        return {std::cos(ea.v), s * ea.dt, s * ea.dx, s * ea.dy};
      }
      case Op::kArctan: {
        const double d = 1.0 / (1.0 + ea.v * ea.v);
        return {std::atan(ea.v), d * ea.dt, d * ea.dx, d * ea.dy};
      }
      default:
        break;
    }
    const FieldEval eb = b->eval(t, x, y);
    switch (op) {
      case Op::kAdd:
        return {ea.v + eb.v, ea.dt + eb.dt, ea.dx + eb.dx, ea.dy + eb.dy};
      case Op::kSub:
        return {ea.v - eb.v, ea.dt - eb.dt, ea.dx - eb.dx, ea.dy - eb.dy};
      case Op::kMul:
        return {ea.v * eb.v, ea.dt * eb.v + ea.v * eb.dt, ea.dx * eb.v + ea.v * eb.dx,
                ea.dy * eb.v + ea.v * eb.dy};
      case Op::kDiv: {
        const double inv = 1.0 / eb.v;
        const double q = ea.v * inv;
        return {q, (ea.dt - q * eb.dt) * inv, (ea.dx - q * eb.dx) * inv,
                (ea.dy - q * eb.dy) * inv};
      }
      default:
        throw std::logic_error("expression: unreachable op");
    }
  }

  bool uses(Op var) const {
    if (op == var) return true;
    if (a && a->uses(var)) return true;
    if (b && b->uses(var)) return true;
    return false;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression: " + what + " at offset " + std::to_string(pos_) +
                                " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->value = v;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+'))
        lhs = make(Op::kAdd, lhs, term());
      else if (consume('-'))
        lhs = make(Op::kSub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (consume('*'))
        lhs = make(Op::kMul, lhs, factor());
      else if (consume('/'))
        lhs = make(Op::kDiv, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    if (consume('-')) return make(Op::kNeg, factor());
    return primary();
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos_ += used;
      return make(Op::kConst, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::string name = ident();
      if (name == "t") return make(Op::kVarT);
      if (name == "x") return make(Op::kVarX);
      if (name == "y") return make(Op::kVarY);
      if (name == "pi") return make(Op::kConst, nullptr, nullptr, M_PI);
      Op fn;
      if (name == "sin")
        fn = Op::kSin;
      else if (name == "cos")
        fn = Op::kCos;
      else if (name == "arctan")
        fn = Op::kArctan;
      else
        fail("unknown identifier '" + name + "'");
      if (!consume('(')) fail("expected '(' after '" + name + "'");
      NodePtr arg = expr();
      if (!consume(')')) fail("expected ')'");
      return make(fn, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(p.run(), text);
}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = value;
  return Expression(std::move(n), std::to_string(value));
}

FieldEval Expression::eval(double t, double x, double y) const { return root_->eval(t, x, y); }

bool Expression::time_only() const { return !root_->uses(Op::kVarX) && !root_->uses(Op::kVarY); }

bool Expression::is_constant() const { return time_only() && !root_->uses(Op::kVarT); }

}  // namespace zermelo
