#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace iccbf {

using Vec = std::vector<double>;

bool all_finite(const Vec& v);

double squared_distance(const Vec& a, const Vec& b);
double euclidean_norm(const Vec& v);

// Axis-aligned box, used for both the admissible input set and the working
// state region. Every axis satisfies lo <= hi.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<std::array<double, 2>> axes);

    std::size_t dim() const { return axes_.size(); }
    double lo(std::size_t axis) const { return axes_[axis][0]; }
    double hi(std::size_t axis) const { return axes_[axis][1]; }
    const std::vector<std::array<double, 2>>& axes() const { return axes_; }

    bool contains(const Vec& v, double tol = 0.0) const;
    Vec clamp(const Vec& v) const;

private:
    std::vector<std::array<double, 2>> axes_;
};

// n uniformly spaced points on [lo, hi]; both endpoints are exact.
std::vector<double> uniform_axis(double lo, double hi, int n);

// Row-major indexer over a Cartesian product of per-axis point lists
// (axis 0 varies slowest). Iteration order is part of the determinism
// contract: reductions over grid points happen in index order.
class CartesianGrid {
public:
    CartesianGrid() = default;
    explicit CartesianGrid(std::vector<std::vector<double>> axes);
    static CartesianGrid uniform(const Box& box, int points_per_axis);

    std::uint64_t size() const { return size_; }
    std::size_t dim() const { return axes_.size(); }
    const std::vector<std::vector<double>>& axes() const { return axes_; }

    Vec point(std::uint64_t index) const;
    void point_into(std::uint64_t index, Vec& out) const;

private:
    std::vector<std::vector<double>> axes_;
    std::uint64_t size_ = 0;
};

// Shortest round-trip decimal text for a double; locale-free, so file output
// is byte-stable across runs and thread counts.
std::string format_double(double v);

} // namespace iccbf
