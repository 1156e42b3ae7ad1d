#include "nsrlab/comparison.hpp"

namespace nsrlab {

std::string_view to_string(ComparisonOp op) {
  switch (op) {
    case ComparisonOp::kGT: return "gt";
    case ComparisonOp::kLT: return "lt";
    case ComparisonOp::kGE: return "ge";
    case ComparisonOp::kLE: return "le";
    case ComparisonOp::kEQ: return "eq";
    case ComparisonOp::kNE: return "ne";
  }
  return "?";
}

std::optional<ComparisonOp> parse_comparison_op(std::string_view text) {
  if (text == "gt" || text == ">") return ComparisonOp::kGT;
  if (text == "lt" || text == "<") return ComparisonOp::kLT;
  if (text == "ge" || text == ">=") return ComparisonOp::kGE;
  if (text == "le" || text == "<=") return ComparisonOp::kLE;
  if (text == "eq" || text == "=" || text == "==") return ComparisonOp::kEQ;
  if (text == "ne" || text == "!=") return ComparisonOp::kNE;
  return std::nullopt;
}

}  // namespace nsrlab
