#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace nsrlab {

enum class ComparisonOp { kGT, kLT, kGE, kLE, kEQ, kNE };

inline constexpr std::array<ComparisonOp, 6> kAllComparisonOps = {
    ComparisonOp::kGT, ComparisonOp::kLT, ComparisonOp::kGE,
    ComparisonOp::kLE, ComparisonOp::kEQ, ComparisonOp::kNE};

// Exact predicate op(a, b).
constexpr bool truth(ComparisonOp op, double a, double b) {
  switch (op) {
    case ComparisonOp::kGT: return a > b;
    case ComparisonOp::kLT: return a < b;
    case ComparisonOp::kGE: return a >= b;
    case ComparisonOp::kLE: return a <= b;
    case ComparisonOp::kEQ: return a == b;
    case ComparisonOp::kNE: return a != b;
  }
  return false;
}

constexpr bool is_equality(ComparisonOp op) {
  return op == ComparisonOp::kEQ || op == ComparisonOp::kNE;
}

std::string_view to_string(ComparisonOp op);

// Accepts "gt", "lt", "ge", "le", "eq", "ne" and the symbols > < >= <= = == != .
std::optional<ComparisonOp> parse_comparison_op(std::string_view text);

}  // namespace nsrlab
