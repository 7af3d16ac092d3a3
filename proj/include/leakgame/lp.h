// Copyright 2026 The Leakgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense two-phase tableau simplex for small linear programs:
//
//   minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
//
// Pivoting follows Bland's rule (lowest eligible index for both the entering
// and the leaving variable), which rules out cycling on degenerate problems.

#ifndef LEAKGAME_LP_H_
#define LEAKGAME_LP_H_

#include <Eigen/Dense>

namespace leakgame {

struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

LpSolution SolveDenseLp(const LinearProgram& lp);

}  // namespace leakgame

#endif  // LEAKGAME_LP_H_
