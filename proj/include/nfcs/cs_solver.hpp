// Copyright 2026 The nfcs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NFCS_CS_SOLVER_HPP
#define NFCS_CS_SOLVER_HPP

#include "nfcs/sensing_operator.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfcs {

// Compressive-sensing reconstruction:
//
//   min_G ||Phi G - S||_2^2 + lambda1 ||G||_1 + lambda2 ||G||_TV
//
// with |x| replaced by sqrt(|x|^2 + nu) on the gradient path, solved by Polak-Ribiere nonlinear
// conjugate gradient with an Armijo backtracking line search. The unknowns are complex; L1 and TV
// act on complex magnitudes. TV is the anisotropic sum of forward differences along z, y and x,
// with out-of-range differences omitted. Gradients are taken with respect to (Re G, Im G) and
// packed back into a complex cube, so <g, d> below is always Re(sum conj(g) d).

struct SolverParams
{
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double nu = 1e-30;
    std::size_t max_outer = 60;
    double alpha = 0.05;            // Armijo sufficient-decrease constant, in (0, 0.5)
    double beta = 0.6;              // backtracking factor, in (0, 1)
    std::size_t max_backtracks = 40;
    double grad_tol = 0.0;          // stop when ||grad|| <= grad_tol
};

/// Throws std::invalid_argument naming the offending parameter.
void validate(const SolverParams &p);

/// Data-scaled defaults: with m = max|Phi^H S|, nu = 1e-15 m^2 + 1e-30 and lambda1 = lambda2 = 1e-2 m.
SolverParams default_solver_params(const SensingOperator &op, const DataCube &data);

class InvalidGradient : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

double smooth_abs(cdouble x, double nu);
cdouble smooth_abs_gradient(cdouble x, double nu);

double l1_norm(const ImageCube &image);
double l1_norm_smoothed(const ImageCube &image, double nu);
ImageCube l1_gradient(const ImageCube &image, double nu);

double tv_norm(const ImageCube &image);
double tv_norm_smoothed(const ImageCube &image, double nu);
ImageCube tv_gradient(const ImageCube &image, double nu);

enum class Smoothing
{
    exact,
    smoothed,
};

struct ObjectiveTerms
{
    double fidelity = 0.0;
    double l1 = 0.0;
    double tv = 0.0;

    double total(const SolverParams &p) const { return fidelity + p.lambda1 * l1 + p.lambda2 * tv; }
};

ObjectiveTerms objective_terms(const ImageCube &image, const DataCube &data, const SensingOperator &op,
                               const SolverParams &params, Smoothing smoothing);
double objective(const ImageCube &image, const DataCube &data, const SensingOperator &op, const SolverParams &params,
                 Smoothing smoothing = Smoothing::smoothed);

/// 2 Phi^H (Phi G - S) + lambda1 grad L1 + lambda2 grad TV (smoothed). Refuses operator pairs whose
/// backward map is not the adjoint of the forward map.
ImageCube gradient(const ImageCube &image, const DataCube &data, const SensingOperator &op,
                   const SolverParams &params);

struct IterationRecord
{
    std::size_t iteration = 0;
    double objective = 0.0; // smoothed objective at the accepted iterate
    double grad_norm = 0.0;
    double step = 0.0;
    double seconds = 0.0;   // since the start of the solve
    std::size_t backtracks = 0;
};

struct SolveReport
{
    std::vector<IterationRecord> iterations;
    bool line_search_failed = false;
    std::string stop_reason;
    double seconds = 0.0;
    std::size_t forward_calls = 0;
    std::size_t backward_calls = 0;
};

struct SolveResult
{
    ImageCube image;
    SolveReport report;
};

SolveResult solve_ncg(const DataCube &data, const SensingOperator &op, const SolverParams &params,
                      std::optional<ImageCube> initial = std::nullopt);

/// CSV with header `iteration,objective,grad_norm,step,seconds`.
void write_report_csv(std::ostream &out, const SolveReport &report);

} // namespace nfcs

#endif
