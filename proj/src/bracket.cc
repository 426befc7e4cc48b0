#include "bracketflow/bracket.h"

#include <algorithm>
#include <cctype>
#include <optional>

namespace bracketflow {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)),
      position_(position) {}

struct FormalBracket::Node {
  int letter = 0;  // > 0 for letters
  std::optional<FormalBracket> left;
  std::optional<FormalBracket> right;
  int degree = 1;
  std::int64_t switch_number = 1;
  int depth = 0;
  int max_letter = 0;
};

FormalBracket::FormalBracket(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

FormalBracket FormalBracket::Letter(int index) {
  if (index <= 0) {
    throw ValidationError("letter index must be positive, got X" +
                          std::to_string(index));
  }
  auto node = std::make_shared<Node>();
  node->letter = index;
  node->max_letter = index;
  return FormalBracket(std::move(node));
}

FormalBracket FormalBracket::Pair(FormalBracket left, FormalBracket right) {
  auto node = std::make_shared<Node>();
  node->degree = left.degree() + right.degree();
  node->switch_number = 2 * (left.switch_number() + right.switch_number());
  node->depth = 1 + std::max(left.depth(), right.depth());
  node->max_letter = std::max(left.max_letter(), right.max_letter());
  node->left = std::move(left);
  node->right = std::move(right);
  return FormalBracket(std::move(node));
}

bool FormalBracket::is_letter() const { return node_->letter > 0; }

int FormalBracket::letter_index() const {
  if (!is_letter()) throw std::domain_error("bracket is not a single letter");
  return node_->letter;
}

const FormalBracket& FormalBracket::left() const {
  if (is_letter()) throw std::domain_error("letter has no left factor");
  return *node_->left;
}

const FormalBracket& FormalBracket::right() const {
  if (is_letter()) throw std::domain_error("letter has no right factor");
  return *node_->right;
}

int FormalBracket::degree() const { return node_->degree; }
std::int64_t FormalBracket::switch_number() const { return node_->switch_number; }
int FormalBracket::depth() const { return node_->depth; }
int FormalBracket::max_letter() const { return node_->max_letter; }

std::pair<FormalBracket, FormalBracket> FormalBracket::Factorize() const {
  if (is_letter()) {
    throw std::domain_error("factorization requires degree >= 2");
  }
  return {*node_->left, *node_->right};
}

std::string FormalBracket::ToString() const {
  if (is_letter()) return "X" + std::to_string(node_->letter);
  return "[" + left().ToString() + "," + right().ToString() + "]";
}

bool operator==(const FormalBracket& a, const FormalBracket& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_letter() != b.is_letter()) return false;
  if (a.is_letter()) return a.letter_index() == b.letter_index();
  if (a.degree() != b.degree()) return false;
  return a.left() == b.left() && a.right() == b.right();
}

namespace {

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  FormalBracket Parse() {
    FormalBracket result = ParseBracketAt();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return result;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void Expect(char c) {
    SkipSpace();
    if (pos_ >= text_.size()) Fail(std::string("expected '") + c + "', got end of input");
    if (text_[pos_] != c) {
      Fail(std::string("expected '") + c + "', got '" + text_[pos_] + "'");
    }
    ++pos_;
  }

  FormalBracket ParseBracketAt() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("expected 'X' or '[', got end of input");
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      FormalBracket left = ParseBracketAt();
      Expect(',');
      FormalBracket right = ParseBracketAt();
      Expect(']');
      return FormalBracket::Pair(std::move(left), std::move(right));
    }
    if (c == 'X') {
      ++pos_;
      const std::size_t digits_at = pos_;
      long long value = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + (text_[pos_] - '0');
        if (value > 1'000'000'000) Fail("letter index too large");
        ++pos_;
      }
      if (pos_ == digits_at) Fail("expected letter index after 'X'");
      if (value == 0) {
        throw ValidationError("letter index must be positive (X0 at position " +
                              std::to_string(digits_at) + ")");
      }
      return FormalBracket::Letter(static_cast<int>(value));
    }
    Fail(std::string("expected 'X' or '[', got '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void AccumulateBudget(const FormalBracket& b, std::vector<int>& orders,
                      int extra) {
  if (b.is_letter()) {
    int& slot = orders[static_cast<std::size_t>(b.letter_index() - 1)];
    slot = std::max(slot, extra);
    return;
  }
  AccumulateBudget(b.left(), orders, extra + 1);
  AccumulateBudget(b.right(), orders, extra + 1);
}

}  // namespace

FormalBracket ParseBracket(std::string_view text) {
  return BracketParser(text).Parse();
}

SmoothnessBudget ComputeSmoothnessBudget(const FormalBracket& bracket, int q) {
  if (bracket.max_letter() > q) {
    throw ValidationError("letter X" + std::to_string(bracket.max_letter()) +
                          " exceeds field string length " + std::to_string(q));
  }
  std::vector<int> orders(static_cast<std::size_t>(q), 0);
  AccumulateBudget(bracket, orders, 0);
  return SmoothnessBudget(std::move(orders));
}

}  // namespace bracketflow
