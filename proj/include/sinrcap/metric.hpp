#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sinrcap {

struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Raised when a distance table or instance violates a metric/instance axiom.
/// `where` carries the offending indices (pair or triple) for diagnostics.
class MetricError : public std::invalid_argument
{
public:
    enum class Kind { empty, not_square, negative, nonzero_diagonal, asymmetry, triangle, bad_index, zero_length };

    MetricError(Kind kind, std::vector<std::size_t> where, const std::string& what)
        : std::invalid_argument(what), kind_(kind), where_(std::move(where))
    {}

    Kind kind() const noexcept { return kind_; }
    const std::vector<std::size_t>& where() const noexcept { return where_; }

private:
    Kind kind_;
    std::vector<std::size_t> where_;
};

// Additive slack on the triangle inequality and symmetry checks.
inline constexpr double kMetricTolerance = 1e-9;

class MetricSpace
{
public:
    enum class Kind { euclidean2d, matrix };

    static MetricSpace euclidean(std::vector<Point> points)
    {
        if (points.empty())
            throw MetricError(MetricError::Kind::empty, {}, "euclidean space needs at least one point");
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
                throw MetricError(MetricError::Kind::bad_index, {i}, "point " + std::to_string(i) + " is not finite");
        MetricSpace m;
        m.kind_ = Kind::euclidean2d;
        m.points_ = std::move(points);
        return m;
    }

    /// Validates all metric axioms exhaustively (O(n^3) triangle check) and
    /// reports the first violation with its witness indices.
    static MetricSpace matrix(const std::vector<std::vector<double>>& table)
    {
        const std::size_t n = table.size();
        if (n == 0)
            throw MetricError(MetricError::Kind::empty, {}, "distance table is empty");
        for (std::size_t i = 0; i < n; ++i)
            if (table[i].size() != n)
                throw MetricError(MetricError::Kind::not_square, {i},
                                  "distance table row " + std::to_string(i) + " has " + std::to_string(table[i].size()) +
                                      " entries, expected " + std::to_string(n));
        std::vector<double> flat(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double d = table[i][j];
                if (!(d >= 0.0) || !std::isfinite(d))
                    throw MetricError(MetricError::Kind::negative, {i, j},
                                      "distance at (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") is negative or not finite");
                flat[i * n + j] = d;
            }
        for (std::size_t i = 0; i < n; ++i)
            if (flat[i * n + i] != 0.0)
                throw MetricError(MetricError::Kind::nonzero_diagonal, {i, i},
                                  "nonzero diagonal at (" + std::to_string(i) + "," + std::to_string(i) + ")");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(flat[i * n + j] - flat[j * n + i]) > kMetricTolerance)
                    throw MetricError(MetricError::Kind::asymmetry, {i, j},
                                      "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t y = 0; y < n; ++y) {
                    const double direct = flat[x * n + z];
                    const double via = flat[x * n + y] + flat[y * n + z];
                    if (direct > via + kMetricTolerance) {
                        std::ostringstream os;
                        os << "triangle violation (" << x << "," << y << "," << z << "): " << direct << " > "
                           << flat[x * n + y] << "+" << flat[y * n + z];
                        throw MetricError(MetricError::Kind::triangle, {x, y, z}, os.str());
                    }
                }
        MetricSpace m;
        m.kind_ = Kind::matrix;
        m.n_ = n;
        m.table_ = std::move(flat);
        return m;
    }

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return kind_ == Kind::euclidean2d ? points_.size() : n_; }

    /// Only populated for euclidean spaces.
    std::span<const Point> points() const noexcept { return points_; }

    double distance(std::size_t a, std::size_t b) const
    {
        if (a >= size() || b >= size())
            throw std::out_of_range("point index out of range: (" + std::to_string(a) + "," + std::to_string(b) +
                                    ") with " + std::to_string(size()) + " points");
        if (kind_ == Kind::matrix)
            return table_[a * n_ + b];
        return std::hypot(points_[a].x - points_[b].x, points_[a].y - points_[b].y);
    }

    std::vector<std::vector<double>> distance_table() const
    {
        const std::size_t n = size();
        std::vector<std::vector<double>> t(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t[i][j] = distance(i, j);
        return t;
    }

    friend bool operator==(const MetricSpace&, const MetricSpace&) = default;

private:
    MetricSpace() = default;

    Kind kind_ = Kind::euclidean2d;
    std::vector<Point> points_;
    std::size_t n_ = 0;
    std::vector<double> table_;
};

struct LinkEnds
{
    std::size_t sender = 0;
    std::size_t receiver = 0;

    friend bool operator==(const LinkEnds&, const LinkEnds&) = default;
};

/// A metric space plus a set of links. Link ids are positions in `links()`.
/// Immutable once built; the sender-to-receiver cross table d(s_v, r_w) is
/// materialized at construction.
class Instance
{
public:
    Instance(MetricSpace space, std::vector<LinkEnds> links) : space_(std::move(space)), links_(std::move(links))
    {
        const std::size_t pts = space_.size();
        for (std::size_t i = 0; i < links_.size(); ++i) {
            if (links_[i].sender >= pts || links_[i].receiver >= pts)
                throw MetricError(MetricError::Kind::bad_index, {i},
                                  "link " + std::to_string(i) + " references a point outside the space");
        }
        const std::size_t n = links_.size();
        lengths_.resize(n);
        cross_.resize(n * n);
        for (std::size_t v = 0; v < n; ++v) {
            lengths_[v] = space_.distance(links_[v].sender, links_[v].receiver);
            if (!(lengths_[v] > 0.0))
                throw MetricError(MetricError::Kind::zero_length, {v}, "link " + std::to_string(v) + " has zero length");
        }
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w)
                cross_[v * n + w] = space_.distance(links_[v].sender, links_[w].receiver);
    }

    const MetricSpace& space() const noexcept { return space_; }
    std::span<const LinkEnds> links() const noexcept { return links_; }
    std::size_t size() const noexcept { return links_.size(); }
    bool empty() const noexcept { return links_.empty(); }

    double length(std::size_t v) const { return lengths_.at(v); }
    std::span<const double> lengths() const noexcept { return lengths_; }

    /// d_vw = d(s_v, r_w).
    double cross(std::size_t v, std::size_t w) const { return cross_[v * links_.size() + w]; }

    double max_length() const noexcept
    {
        return lengths_.empty() ? 1.0 : *std::max_element(lengths_.begin(), lengths_.end());
    }
    double min_length() const noexcept
    {
        return lengths_.empty() ? 1.0 : *std::min_element(lengths_.begin(), lengths_.end());
    }

    /// l_max / l_min; 1 for an instance without links.
    double delta() const noexcept { return max_length() / min_length(); }

    /// l_max / max{1, l_min}, the length-ratio used in the bounded model.
    double delta_bounded() const noexcept { return std::max(1.0, max_length() / std::max(1.0, min_length())); }

    friend bool operator==(const Instance& a, const Instance& b) { return a.space_ == b.space_ && a.links_ == b.links_; }

private:
    MetricSpace space_;
    std::vector<LinkEnds> links_;
    std::vector<double> lengths_;
    std::vector<double> cross_;
};

} // namespace sinrcap
