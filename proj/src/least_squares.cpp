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

#include "chipsim/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace chipsim {

namespace {

Eigen::MatrixXd jacobian(const ResidualFn &f, const Eigen::VectorXd &x, Eigen::Index m) {
    Eigen::MatrixXd j(m, x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(k)));
        probe(k) = x(k) + h;
        const Eigen::VectorXd up = f(probe);
        probe(k) = x(k) - h;
        const Eigen::VectorXd down = f(probe);
        probe(k) = x(k);
        j.col(k) = (up - down) / (2.0 * h);
    }
    return j;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFn &residuals, Eigen::VectorXd x0,
                                       const LeastSquaresOptions &options) {
    LeastSquaresResult out;
    out.params = std::move(x0);
    Eigen::VectorXd r = residuals(out.params);
    out.cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;

    for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
        if (out.cost == 0.0) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd j = jacobian(residuals, out.params, r.size());
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-30);

        bool accepted = false;
        double step_norm = 0.0;
        double previous = out.cost;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * scale;
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd trial = out.params + step;
            const Eigen::VectorXd r_trial = residuals(trial);
            const double cost = 0.5 * r_trial.squaredNorm();
            if (std::isfinite(cost) && cost < out.cost) {
                step_norm = (step.cwiseProduct(scale.cwiseSqrt())).norm() /
                            (out.params.cwiseProduct(scale.cwiseSqrt())).norm();
                out.params = trial;
                r = r_trial;
                out.cost = cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            // No descent direction left at machine precision.
            out.converged = true;
            break;
        }
        if ((previous - out.cost) <= options.cost_tolerance * previous ||
            step_norm <= options.step_tolerance) {
            out.converged = true;
            ++out.iterations;
            break;
        }
    }
    return out;
}

}  // namespace chipsim
