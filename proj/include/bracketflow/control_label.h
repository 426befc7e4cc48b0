#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bracketflow/bracket.h"

namespace bracketflow {

enum class Sign : int { kPlus = 1, kMinus = -1 };

inline Sign Flip(Sign s) { return s == Sign::kPlus ? Sign::kMinus : Sign::kPlus; }
inline int ToInt(Sign s) { return static_cast<int>(s); }
inline char ToChar(Sign s) { return s == Sign::kPlus ? '+' : '-'; }

/// A control label (B, g, sgn): a formal bracket, the dynamics fields fed to
/// its letters, and an orientation.
///
/// `fields[j-1]` is the 1-based index i of the dynamics field f_i substituted
/// for the letter X_j.
struct ControlLabel {
  FormalBracket bracket;
  std::vector<int> fields;
  Sign sign = Sign::kPlus;

  int degree() const { return bracket.degree(); }
  std::int64_t switch_number() const { return bracket.switch_number(); }

  /// Index i such that the letter X_j evaluates to f_i.
  int FieldForLetter(int j) const;

  /// Checks letters against q = fields.size(), field indices against
  /// 1..num_fields, and degree against max_degree. Throws ValidationError.
  void Validate(int num_fields, int max_degree) const;

  /// Short text such as "([X1,X2],(1,2),-)".
  std::string ToString() const;

  friend bool operator==(const ControlLabel& a, const ControlLabel& b) {
    return a.sign == b.sign && a.fields == b.fields && a.bracket == b.bracket;
  }
};

/// {"bracket": "<text>", "fields": [i1,...,iq], "sign": "+"|"-"}
nlohmann::json LabelToJson(const ControlLabel& label);
ControlLabel LabelFromJson(const nlohmann::json& j);

}  // namespace bracketflow
