#pragma once

// Dense two-phase simplex with Bland's rule. Sized for penalty-model
// synthesis (a few hundred rows, under a hundred columns); not a general
// purpose LP code.

#include <limits>
#include <vector>

namespace qaf::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEq, Equal, GreaterEq };

struct Row {
  std::vector<double> coef;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;
};

/// maximize objective . x  subject to rows, lower <= x <= upper.
struct Problem {
  std::vector<double> objective;
  std::vector<double> lower;  // -kInf allowed
  std::vector<double> upper;  // +kInf allowed
  std::vector<Row> rows;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

Solution solve(const Problem& problem);

}  // namespace qaf::lp
