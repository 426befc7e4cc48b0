#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bracketflow {

/// Thrown when bracket text does not follow `B ::= Xn | [B,B]`.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Thrown for well-formed input that violates a domain constraint
/// (letter index 0, field index out of range, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterated formal bracket over the letters X_1, X_2, ...
///
/// Immutable; copies share the underlying tree. Degree and switch number are
/// computed once at construction.
class FormalBracket {
 public:
  static FormalBracket Letter(int index);
  static FormalBracket Pair(FormalBracket left, FormalBracket right);

  bool is_letter() const;
  /// Index j of the letter X_j. Throws std::domain_error on a pair.
  int letter_index() const;
  const FormalBracket& left() const;
  const FormalBracket& right() const;

  /// Number of letters.
  int degree() const;
  /// 1 for a letter, 2(s1 + s2) for [B1,B2].
  std::int64_t switch_number() const;
  /// 0 for a letter, 1 + max(depth of children) otherwise.
  int depth() const;
  /// Largest letter index occurring in the bracket.
  int max_letter() const;

  /// The unique (B1, B2) with B = [B1, B2]. Throws std::domain_error for
  /// letters.
  std::pair<FormalBracket, FormalBracket> Factorize() const;

  /// Canonical text, e.g. "[[X1,X2],X3]".
  std::string ToString() const;

  friend bool operator==(const FormalBracket& a, const FormalBracket& b);

 private:
  struct Node;
  explicit FormalBracket(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

/// Parses `B ::= Xn | [B,B]`, whitespace ignored, n a positive decimal.
FormalBracket ParseBracket(std::string_view text);

/// Minimal per-index continuity orders k_1..k_q needed for B(g) to be a
/// continuous vector field. Each bracketing differentiates both sides once.
class SmoothnessBudget {
 public:
  explicit SmoothnessBudget(std::vector<int> orders) : orders_(std::move(orders)) {}

  /// Order required on g_j (1-based); 0 for letters not occurring.
  int order(int j) const { return orders_.at(static_cast<std::size_t>(j - 1)); }
  int size() const { return static_cast<int>(orders_.size()); }
  const std::vector<int>& orders() const { return orders_; }

 private:
  std::vector<int> orders_;
};

SmoothnessBudget ComputeSmoothnessBudget(const FormalBracket& bracket, int q);

}  // namespace bracketflow
