#include "iccbf/numeric.hpp"

#include "iccbf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace iccbf {

bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double squared_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double euclidean_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Box::Box(std::vector<std::array<double, 2>> axes) : axes_(std::move(axes)) {
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (!std::isfinite(axes_[i][0]) || !std::isfinite(axes_[i][1]))
            throw NonFinite("box axis " + std::to_string(i) + " has a non-finite bound");
        if (axes_[i][0] > axes_[i][1])
            throw OutOfRange("box axis " + std::to_string(i) + " has lo > hi");
    }
}

bool Box::contains(const Vec& v, double tol) const {
    if (v.size() != axes_.size()) return false;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (v[i] < axes_[i][0] - tol || v[i] > axes_[i][1] + tol) return false;
    }
    return true;
}

Vec Box::clamp(const Vec& v) const {
    Vec out = v;
    for (std::size_t i = 0; i < axes_.size() && i < out.size(); ++i)
        out[i] = std::min(std::max(out[i], axes_[i][0]), axes_[i][1]);
    return out;
}

std::vector<double> uniform_axis(double lo, double hi, int n) {
    if (n < 2) throw ResolutionTooSmall("axis resolution must be at least 2");
    std::vector<double> pts(static_cast<std::size_t>(n));
    const double span = hi - lo;
    for (int j = 0; j < n; ++j)
        pts[static_cast<std::size_t>(j)] = lo + span * static_cast<double>(j) / static_cast<double>(n - 1);
    pts.front() = lo;
    pts.back() = hi;
    return pts;
}

CartesianGrid::CartesianGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
    size_ = axes_.empty() ? 0 : 1;
    for (const auto& axis : axes_) {
        if (axis.empty()) throw EmptyGrid("grid axis has no points");
        size_ *= static_cast<std::uint64_t>(axis.size());
    }
}

CartesianGrid CartesianGrid::uniform(const Box& box, int points_per_axis) {
    std::vector<std::vector<double>> axes;
    axes.reserve(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i)
        axes.push_back(uniform_axis(box.lo(i), box.hi(i), points_per_axis));
    return CartesianGrid(std::move(axes));
}

Vec CartesianGrid::point(std::uint64_t index) const {
    Vec out(axes_.size());
    point_into(index, out);
    return out;
}

void CartesianGrid::point_into(std::uint64_t index, Vec& out) const {
    out.resize(axes_.size());
    for (std::size_t a = axes_.size(); a-- > 0;) {
        const std::uint64_t n = axes_[a].size();
        out[a] = axes_[a][static_cast<std::size_t>(index % n)];
        index /= n;
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace iccbf
