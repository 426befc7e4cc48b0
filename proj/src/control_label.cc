#include "bracketflow/control_label.h"

namespace bracketflow {

int ControlLabel::FieldForLetter(int j) const {
  if (j < 1 || j > static_cast<int>(fields.size())) {
    throw ValidationError("letter X" + std::to_string(j) +
                          " has no field in a string of length " +
                          std::to_string(fields.size()));
  }
  return fields[static_cast<std::size_t>(j - 1)];
}

void ControlLabel::Validate(int num_fields, int max_degree) const {
  const int q = static_cast<int>(fields.size());
  if (bracket.max_letter() > q) {
    throw ValidationError("label " + ToString() + ": letter X" +
                          std::to_string(bracket.max_letter()) +
                          " exceeds field string length " + std::to_string(q));
  }
  for (int i : fields) {
    if (i < 1 || i > num_fields) {
      throw ValidationError("label " + ToString() + ": field index " +
                            std::to_string(i) + " outside 1.." +
                            std::to_string(num_fields));
    }
  }
  if (degree() > max_degree) {
    throw ValidationError("label " + ToString() + " has degree " +
                          std::to_string(degree()) + " > bound " +
                          std::to_string(max_degree));
  }
}

std::string ControlLabel::ToString() const {
  std::string out = "(" + bracket.ToString() + ",(";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(fields[i]);
  }
  out += "),";
  out += ToChar(sign);
  out += ")";
  return out;
}

nlohmann::json LabelToJson(const ControlLabel& label) {
  return nlohmann::json{{"bracket", label.bracket.ToString()},
                        {"fields", label.fields},
                        {"sign", std::string(1, ToChar(label.sign))}};
}

ControlLabel LabelFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("bracket") || !j.contains("fields") ||
      !j.contains("sign")) {
    throw ValidationError(
        "control label JSON needs \"bracket\", \"fields\" and \"sign\"");
  }
  ControlLabel label{ParseBracket(j.at("bracket").get<std::string>()), {},
                     Sign::kPlus};
  for (const auto& f : j.at("fields")) {
    if (!f.is_number_integer()) {
      throw ValidationError("control label fields must be integers");
    }
    label.fields.push_back(f.get<int>());
  }
  const std::string sign = j.at("sign").get<std::string>();
  if (sign == "+") {
    label.sign = Sign::kPlus;
  } else if (sign == "-") {
    label.sign = Sign::kMinus;
  } else {
    throw ValidationError("control label sign must be \"+\" or \"-\"");
  }
  if (label.bracket.max_letter() > static_cast<int>(label.fields.size())) {
    throw ValidationError("label " + label.ToString() +
                          " uses a letter beyond its field string");
  }
  for (int i : label.fields) {
    if (i < 1) throw ValidationError("field indices are 1-based");
  }
  return label;
}

}  // namespace bracketflow
