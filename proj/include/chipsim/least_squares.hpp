// Copyright 2026 The chipsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace chipsim {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

struct LeastSquaresOptions {
    int max_iterations = 400;
    /// Stop when the relative cost decrease of an accepted step falls below this.
    double cost_tolerance = 1e-14;
    /// Stop when the scaled step length falls below this.
    double step_tolerance = 1e-13;
};

struct LeastSquaresResult {
    Eigen::VectorXd params;
    /// 0.5 * sum of squared residuals.
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling)
/// using central-difference Jacobians.
LeastSquaresResult levenberg_marquardt(const ResidualFn &residuals, Eigen::VectorXd x0,
                                       const LeastSquaresOptions &options = {});

}  // namespace chipsim
