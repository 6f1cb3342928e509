#ifndef MAXMART_PATH_HPP_
#define MAXMART_PATH_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace maxmart {

// Uniform time grid t0 + i*step, i in [0, n_points).
struct TimeGrid {
    double t0 = 0.0;
    double step = 0.0;
    std::size_t n_points = 0;

    TimeGrid() = default;
    TimeGrid(double t0_, double step_, std::size_t n) : t0(t0_), step(step_), n_points(n) {
        if (t0 < 0.0) throw std::invalid_argument("TimeGrid: t0 must be >= 0");
        if (step <= 0.0) throw std::invalid_argument("TimeGrid: step must be > 0");
        if (n_points < 2) throw std::invalid_argument("TimeGrid: n_points must be >= 2");
    }

    double time_at(std::size_t i) const { return t0 + step * static_cast<double>(i); }
    double horizon() const { return time_at(n_points - 1); }
    bool operator==(const TimeGrid& o) const {
        return t0 == o.t0 && step == o.step && n_points == o.n_points;
    }
};

// Grid index of a random time; not every random time is attained on a finite path.
struct TimeIndex {
    static constexpr std::size_t kNotAttained = std::numeric_limits<std::size_t>::max();
    std::size_t index = kNotAttained;

    TimeIndex() = default;
    explicit TimeIndex(std::size_t i) : index(i) {}
    static TimeIndex not_attained() { return TimeIndex{}; }
    bool attained() const { return index != kNotAttained; }
    bool operator==(const TimeIndex& o) const { return index == o.index; }
};

// A discretized trajectory. Stopped paths are stored absorbed: values are
// constant from stopped_at onward, so every path in a batch shares one grid.
struct Path {
    TimeGrid grid;
    std::vector<double> values;
    std::optional<std::size_t> stopped_at;

    Path() = default;
    Path(TimeGrid g, std::vector<double> v, std::optional<std::size_t> s = std::nullopt)
        : grid(g), values(std::move(v)), stopped_at(s) {
        if (values.size() != grid.n_points)
            throw std::invalid_argument("Path: values size does not match grid");
        if (stopped_at && *stopped_at >= grid.n_points)
            throw std::invalid_argument("Path: stopped_at outside grid");
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double back() const { return values.back(); }
};

inline void require_same_grid(const Path& a, const Path& b, const char* what) {
    if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace maxmart

#endif  // MAXMART_PATH_HPP_
