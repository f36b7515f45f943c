#pragma once

#include <memory>
#include <string>

namespace zermelo {

/// Value of a scalar field together with its first partial derivatives
/// with respect to time and the two spatial coordinates.
struct FieldEval {
  double v = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

/// A closed-form scalar field of (t, x, y).
///
/// Expressions are built from the grammar
///
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/') factor)*
///   factor  := '-' factor | primary
///   primary := number | 'pi' | 't' | 'x' | 'y'
///            | ('sin' | 'cos' | 'arctan') '(' expr ')'
///            | '(' expr ')'
///
/// and evaluate in forward mode, returning the value and the three
/// partials in a single pass.
class Expression {
 public:
  /// Parses `text`; throws std::invalid_argument with a character offset
  /// on malformed input.
  static Expression parse(const std::string& text);
  /// A constant field (all partials zero).
  static Expression constant(double value);

  FieldEval eval(double t, double x, double y) const;

  /// Canonical textual form (round-trips through parse()).
  const std::string& text() const { return text_; }

  /// True when the field has no x/y dependence (detected structurally).
  bool time_only() const;
  /// True when the field has no dependence on t, x or y.
  bool is_constant() const;

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text);
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace zermelo
