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

#include "nfcs/cs_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace nfcs {

void validate(const SolverParams &p)
{
    if (!(p.lambda1 >= 0.0) || !(p.lambda2 >= 0.0))
        throw std::invalid_argument("solver: lambda1 and lambda2 must be >= 0");
    if (!(p.nu > 0.0))
        throw std::invalid_argument("solver: nu must be > 0");
    if (!(p.alpha > 0.0 && p.alpha < 0.5))
        throw std::invalid_argument("solver: alpha must lie in (0, 0.5)");
    if (!(p.beta > 0.0 && p.beta < 1.0))
        throw std::invalid_argument("solver: beta must lie in (0, 1)");
    if (!(p.grad_tol >= 0.0))
        throw std::invalid_argument("solver: grad_tol must be >= 0");
}

SolverParams default_solver_params(const SensingOperator &op, const DataCube &data)
{
    const ImageCube back = op.backward(data);
    double m = 0.0;
    for (const auto &v : back.values())
        m = std::max(m, std::abs(v));
    SolverParams p;
    p.nu = 1e-15 * m * m + 1e-30;
    p.lambda1 = 1e-2 * m;
    p.lambda2 = 1e-2 * m;
    return p;
}

double smooth_abs(cdouble x, double nu)
{
    return std::sqrt(std::norm(x) + nu);
}

cdouble smooth_abs_gradient(cdouble x, double nu)
{
    return x / std::sqrt(std::norm(x) + nu);
}

double l1_norm(const ImageCube &image)
{
    double s = 0.0;
    for (const auto &v : image.values())
        s += std::abs(v);
    return s;
}

double l1_norm_smoothed(const ImageCube &image, double nu)
{
    double s = 0.0;
    for (const auto &v : image.values())
        s += smooth_abs(v, nu);
    return s;
}

namespace {

void accumulate_l1_gradient(ImageCube &g, const ImageCube &image, double nu, double scale)
{
    for (std::size_t i = 0; i < image.size(); ++i)
        g[i] += scale * smooth_abs_gradient(image[i], nu);
}

// Visits every in-range forward difference (a -> b means x[b] - x[a]) along x, y and z. Each
// axis is a run of contiguous `a` indices with a fixed offset to `b`.
template <typename Fn>
void for_each_difference(const Dims3 &d, Fn &&fn)
{
    const std::size_t sy = d[2], sz = d[1] * d[2];
    if (d[2] > 1)
        for (std::size_t row = 0; row < d[0] * d[1]; ++row)
            for (std::size_t i = row * sy, end = i + sy - 1; i < end; ++i)
                fn(i, i + 1);
    if (d[1] > 1)
        for (std::size_t z = 0; z < d[0]; ++z)
            for (std::size_t i = z * sz, end = i + sz - sy; i < end; ++i)
                fn(i, i + sy);
    for (std::size_t i = 0, end = (d[0] - 1) * sz; d[0] > 1 && i < end; ++i)
        fn(i, i + sz);
}

void accumulate_tv_gradient(ImageCube &g, const ImageCube &image, double nu, double scale)
{
    for_each_difference(image.dims(), [&](std::size_t a, std::size_t b) {
        const cdouble t = scale * smooth_abs_gradient(image[b] - image[a], nu);
        g[b] += t;
        g[a] -= t;
    });
}

} // namespace

ImageCube l1_gradient(const ImageCube &image, double nu)
{
    ImageCube g(image.dims());
    accumulate_l1_gradient(g, image, nu, 1.0);
    return g;
}

double tv_norm(const ImageCube &image)
{
    double s = 0.0;
    for_each_difference(image.dims(), [&](std::size_t a, std::size_t b) { s += std::abs(image[b] - image[a]); });
    return s;
}

double tv_norm_smoothed(const ImageCube &image, double nu)
{
    double s = 0.0;
    for_each_difference(image.dims(),
                        [&](std::size_t a, std::size_t b) { s += smooth_abs(image[b] - image[a], nu); });
    return s;
}

ImageCube tv_gradient(const ImageCube &image, double nu)
{
    ImageCube g(image.dims());
    accumulate_tv_gradient(g, image, nu, 1.0);
    return g;
}

namespace {

double regularizer(const ImageCube &image, const SolverParams &p, Smoothing s)
{
    double r = 0.0;
    if (p.lambda1 != 0.0)
        r += p.lambda1 * (s == Smoothing::smoothed ? l1_norm_smoothed(image, p.nu) : l1_norm(image));
    if (p.lambda2 != 0.0)
        r += p.lambda2 * (s == Smoothing::smoothed ? tv_norm_smoothed(image, p.nu) : tv_norm(image));
    return r;
}

DataCube residual(const ImageCube &image, const DataCube &data, const SensingOperator &op)
{
    if (data.dims() != op.data_dims() || image.dims() != op.image_dims())
        throw std::invalid_argument("objective: dimension mismatch");
    DataCube r = op.forward(image);
    DataCube masked = data;
    if (op.mask())
        apply_mask_in_place(masked, *op.mask());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= masked[i];
    return r;
}

void add_regularizer_gradient(ImageCube &g, const ImageCube &image, const SolverParams &p)
{
    if (p.lambda1 != 0.0)
        accumulate_l1_gradient(g, image, p.nu, p.lambda1);
    if (p.lambda2 != 0.0)
        accumulate_tv_gradient(g, image, p.nu, p.lambda2);
}

ImageCube gradient_from_residual(const ImageCube &image, const DataCube &r, const SensingOperator &op,
                                 const SolverParams &p)
{
    ImageCube g = op.backward(r);
    for (auto &v : g.values())
        v *= 2.0;
    add_regularizer_gradient(g, image, p);
    return g;
}

double real_dot(const ImageCube &a, const ImageCube &b)
{
    return dot(a.values(), b.values()).real();
}

} // namespace

ObjectiveTerms objective_terms(const ImageCube &image, const DataCube &data, const SensingOperator &op,
                               const SolverParams &params, Smoothing smoothing)
{
    ObjectiveTerms t;
    t.fidelity = norm2_squared(residual(image, data, op).values());
    if (smoothing == Smoothing::smoothed)
    {
        t.l1 = l1_norm_smoothed(image, params.nu);
        t.tv = tv_norm_smoothed(image, params.nu);
    }
    else
    {
        t.l1 = l1_norm(image);
        t.tv = tv_norm(image);
    }
    return t;
}

double objective(const ImageCube &image, const DataCube &data, const SensingOperator &op, const SolverParams &params,
                 Smoothing smoothing)
{
    return norm2_squared(residual(image, data, op).values()) + regularizer(image, params, smoothing);
}

ImageCube gradient(const ImageCube &image, const DataCube &data, const SensingOperator &op, const SolverParams &params)
{
    if (op.paper_faithful())
        throw InvalidGradient("gradient: operator '" + op.name() +
                              "' is not an adjoint pair (J-weighted backward vs 1/J-weighted forward); "
                              "use the adjoint_exact kernel mode for optimization");
    return gradient_from_residual(image, residual(image, data, op), op, params);
}

SolveResult solve_ncg(const DataCube &data, const SensingOperator &op, const SolverParams &params,
                      std::optional<ImageCube> initial)
{
    validate(params);
    if (op.paper_faithful())
        throw InvalidGradient("solve_ncg: operator '" + op.name() + "' is not an adjoint pair");
    if (data.dims() != op.data_dims())
        throw std::invalid_argument("solve_ncg: data dims do not match the operator");

    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t_start).count(); };

    SolveResult out;
    SolveReport &rep = out.report;

    ImageCube x = initial ? std::move(*initial) : ImageCube(op.image_dims());
    if (x.dims() != op.image_dims())
        throw std::invalid_argument("solve_ncg: initial image dims do not match the operator");

    DataCube r = residual(x, data, op);
    ++rep.forward_calls;
    ImageCube g = gradient_from_residual(x, r, op, params);
    ++rep.backward_calls;
    double f = norm2_squared(r.values()) + regularizer(x, params, Smoothing::smoothed);
    double g2 = norm2_squared(g.values());
    rep.iterations.push_back({0, f, std::sqrt(g2), 0.0, elapsed(), 0});

    ImageCube d(g.dims());
    for (std::size_t i = 0; i < g.size(); ++i)
        d[i] = -g[i];

    ImageCube x_trial(x.dims());
    DataCube r_trial(r.dims());
    rep.stop_reason = "max_outer";
    double t_prev = 0.0;
    for (std::size_t it = 1; it <= params.max_outer; ++it)
    {
        if (std::sqrt(g2) <= params.grad_tol)
        {
            rep.stop_reason = "grad_tol";
            break;
        }
        double gd = real_dot(g, d);
        if (!(gd < 0.0))
        {
            for (std::size_t i = 0; i < g.size(); ++i)
                d[i] = -g[i];
            gd = -g2;
        }

        const DataCube phi_d = op.forward(d);
        ++rep.forward_calls;
        const double curvature = 2.0 * norm2_squared(phi_d.values());
        double t = curvature > 0.0 ? -gd / curvature : 1.0;
        if (!std::isfinite(t) || t <= 0.0)
            t = 1.0;
        // The quadratic estimate ignores the regularizer's curvature; do not grow faster than 1/beta.
        if (t_prev > 0.0)
            t = std::min(t, t_prev / params.beta);

        std::size_t backtracks = 0;
        double f_trial = 0.0;
        for (;;)
        {
            for (std::size_t i = 0; i < x.size(); ++i)
                x_trial[i] = x[i] + t * d[i];
            for (std::size_t i = 0; i < r.size(); ++i)
                r_trial[i] = r[i] + t * phi_d[i];
            f_trial = norm2_squared(r_trial.values()) + regularizer(x_trial, params, Smoothing::smoothed);
            if (f_trial <= f + params.alpha * t * gd)
                break;
            if (++backtracks > params.max_backtracks)
                break;
            t *= params.beta;
        }
        if (backtracks > params.max_backtracks)
        {
            rep.line_search_failed = true;
            rep.stop_reason = "line_search";
            break;
        }

        t_prev = t;
        std::swap(x, x_trial);
        std::swap(r, r_trial);
        f = f_trial;
        ImageCube g_new = gradient_from_residual(x, r, op, params);
        ++rep.backward_calls;
        const double g2_new = norm2_squared(g_new.values());

        // Polak-Ribiere, restarted to steepest descent when negative.
        double beta_pr = 0.0;
        if (g2 > 0.0)
        {
            double num = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
                num += (std::conj(g_new[i]) * (g_new[i] - g[i])).real();
            beta_pr = std::max(0.0, num / g2);
        }
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] = -g_new[i] + beta_pr * d[i];
        g = std::move(g_new);
        g2 = g2_new;
        rep.iterations.push_back({it, f, std::sqrt(g2), t, elapsed(), backtracks});
    }
    if (rep.stop_reason == "max_outer" && std::sqrt(g2) <= params.grad_tol)
        rep.stop_reason = "grad_tol";

    rep.seconds = elapsed();
    out.image = std::move(x);
    return out;
}

void write_report_csv(std::ostream &out, const SolveReport &report)
{
    out << "iteration,objective,grad_norm,step,seconds\n";
    char buf[200];
    for (const auto &r : report.iterations)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.6f\n", r.iteration, r.objective, r.grad_norm, r.step,
                      r.seconds);
        out << buf;
    }
}

} // namespace nfcs
