#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedsphere {

struct TrajectoryMeta {
    std::string solver;
    double step = 0.0;
    std::map<std::string, double> params;
    /// Set by solvers that stopped early because the state left the
    /// representable range.
    bool overflow_truncated = false;
};

/// Sampled solution u(t) with its derivative. Immutable by convention once a
/// solver returns it.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> derivatives;
    TrajectoryMeta meta;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] bool empty() const noexcept { return times.empty(); }

    void push_back(double t, double u, double du) {
        times.push_back(t);
        values.push_back(u);
        derivatives.push_back(du);
    }

    void reserve(std::size_t n) {
        times.reserve(n);
        values.reserve(n);
        derivatives.reserve(n);
    }

    /// Throws std::invalid_argument unless the grid is strictly increasing,
    /// starts at `start` and the three columns have equal length.
    void validate(double start = 0.0) const {
        if (values.size() != times.size() || derivatives.size() != times.size()) {
            throw std::invalid_argument("trajectory columns differ in length");
        }
        if (times.empty()) {
            return;
        }
        if (times.front() != start) {
            throw std::invalid_argument("trajectory does not start at the expected time");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw std::invalid_argument("trajectory times are not strictly increasing");
            }
        }
    }
};

/// Uniform step of `traj`, taken from its metadata when present.
inline double uniform_step(const Trajectory& traj) {
    if (traj.meta.step > 0.0) {
        return traj.meta.step;
    }
    if (traj.size() < 2) {
        throw std::invalid_argument("cannot infer a step from fewer than two samples");
    }
    return traj.times[1] - traj.times[0];
}

} // namespace sedsphere
