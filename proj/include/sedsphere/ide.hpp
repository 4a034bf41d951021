#pragma once

// Direct solver for the rescaled equation of motion
//     u'(t) + u(t) + sqrt(kappa/pi) int_0^t u'(s) / sqrt(t - s) ds = 1.
//
// The memory integral is discretised by product integration: u' is
// reconstructed as piecewise linear on a uniform grid and integrated exactly
// against the Abel kernel. u is advanced by the trapezoidal rule, which is the
// exact integral of the same reconstruction. The newest derivative appears in
// the last cell of the memory sum, so every step solves one scalar linear
// equation for it. Cost is O(n) per step and O(n^2) per solve.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sedsphere/trajectory.hpp"

namespace sedsphere::ide {

/// Per-cell weights of the product rule on a uniform grid. Cell m covers
/// s in [t_n - m h, t_n - (m - 1) h]; `left[m]` multiplies the node at its
/// left end and `right[m]` the node at its right end. Both are written in a
/// form free of cancellation for large m.
class CellWeights {
public:
    CellWeights(std::size_t cells, double h) : left_(cells + 1, 0.0), right_(cells + 1, 0.0) {
        const double scale = (2.0 / 3.0) * std::sqrt(h);
        for (std::size_t m = 1; m <= cells; ++m) {
            const double p = std::sqrt(static_cast<double>(m));
            const double q = std::sqrt(static_cast<double>(m - 1));
            const double sum2 = (p + q) * (p + q);
            left_[m] = scale * (p + 2.0 * q) / sum2;
            right_[m] = scale * (2.0 * p + q) / sum2;
        }
    }

    [[nodiscard]] std::size_t cells() const noexcept { return left_.size() - 1; }

    /// Weight of node j in the rule for t_n (0 <= j <= n <= cells()).
    [[nodiscard]] double weight(std::size_t n, std::size_t j) const noexcept {
        double w = 0.0;
        if (j < n) {
            w += left_[n - j];
        }
        if (j >= 1) {
            w += right_[n - j + 1];
        }
        return w;
    }

    /// sum_j w_{n,j} f_j
    template <class Values>
    [[nodiscard]] double apply(std::size_t n, const Values& f) const {
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            acc += weight(n, j) * f[j];
        }
        return acc;
    }

private:
    std::vector<double> left_;
    std::vector<double> right_;
};

/// Weights w_{n,0..n} with sum_j w_{n,j} f(t_j) = int_0^{t_n} f(s) / sqrt(t_n - s) ds
/// exactly for f piecewise linear on the grid t_j = j h.
inline std::vector<double> abel_weights(std::size_t n, double h) {
    if (n < 1) {
        throw std::domain_error("abel_weights: need at least one cell");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::domain_error("abel_weights: step must be positive");
    }
    const CellWeights cells(n, h);
    std::vector<double> w(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        w[j] = cells.weight(n, j);
    }
    return w;
}

/// Solve the equation of motion from u(0) = u0 with u'(0) = 1 - u0 on
/// [0, T] with step h. The returned trajectory stores u and u' at t_n = n h.
inline Trajectory solve_ide(double kappa, double u0, double h, double T) {
    if (!(kappa > 0.0 && kappa < 9.0)) {
        throw std::domain_error("solve_ide: kappa must lie in (0, 9)");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::domain_error("solve_ide: step must be positive");
    }
    if (!(T >= h) || !std::isfinite(T)) {
        throw std::domain_error("solve_ide: horizon must satisfy T >= h");
    }
    if (!std::isfinite(u0)) {
        throw std::domain_error("solve_ide: u0 must be finite");
    }
    const auto steps = static_cast<std::size_t>(std::floor(T / h + 1e-9));
    const double memory = std::sqrt(kappa / std::numbers::pi);
    const CellWeights cells(steps, h);

    Trajectory traj;
    traj.meta.solver = "ide";
    traj.meta.step = h;
    traj.meta.params = {{"kappa", kappa}, {"u0", u0}, {"h", h}, {"T", T}};
    traj.reserve(steps + 1);
    traj.push_back(0.0, u0, 1.0 - u0);

    std::vector<double>& du = traj.derivatives;
    const double diagonal = 1.0 + 0.5 * h + memory * cells.weight(1, 1);
    for (std::size_t n = 1; n <= steps; ++n) {
        double history = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            history += cells.weight(n, j) * du[j];
        }
        const double u_prev = traj.values[n - 1];
        const double rhs = 1.0 - u_prev - 0.5 * h * du[n - 1] - memory * history;
        const double du_n = rhs / diagonal;
        const double u_n = u_prev + 0.5 * h * (du[n - 1] + du_n);
        traj.push_back(static_cast<double>(n) * h, u_n, du_n);
    }
    return traj;
}

/// int_0^{t_k} u'(s) / sqrt(t_k - s) ds from the stored derivative samples of
/// a uniformly spaced trajectory, k = t_index.
inline double basset_integral(const Trajectory& traj, std::size_t t_index) {
    if (t_index >= traj.size()) {
        throw std::out_of_range("basset_integral: index " + std::to_string(t_index) +
                                " outside trajectory of size " + std::to_string(traj.size()));
    }
    if (t_index == 0) {
        return 0.0;
    }
    const CellWeights cells(t_index, uniform_step(traj));
    return cells.apply(t_index, traj.derivatives);
}

} // namespace sedsphere::ide
