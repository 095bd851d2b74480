#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sinrcap/metric.hpp"
#include "sinrcap/rng.hpp"

namespace sinrcap {

/// Random-topology parameters: senders uniform in a world x world square,
/// receivers at a uniform angle and uniform radius in (0, d_max] around them.
struct GenConfig
{
    std::size_t n = 200;
    double d_max = 10.0;
    double world = 100.0;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (n < 1)
            throw std::invalid_argument("gen.n must be >= 1");
        if (!(d_max > 0.0))
            throw std::invalid_argument("gen.d_max must be > 0");
        if (!(world > 0.0))
            throw std::invalid_argument("gen.world must be > 0");
    }
};

/// Point 2i is the sender and 2i+1 the receiver of link i. Receivers are not
/// clamped to the square; zero radii are redrawn.
inline Instance gen_random(const GenConfig& cfg)
{
    cfg.validate();
    Rng rng(cfg.seed);
    std::vector<Point> pts;
    std::vector<LinkEnds> links;
    pts.reserve(2 * cfg.n);
    links.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const Point s{uniform(rng, 0.0, cfg.world), uniform(rng, 0.0, cfg.world)};
        const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        double radius = 0.0;
        Point r;
        do {
            radius = uniform(rng, 0.0, cfg.d_max);
            r = {s.x + radius * std::cos(angle), s.y + radius * std::sin(angle)};
        } while (!(radius > 0.0) || std::hypot(r.x - s.x, r.y - s.y) <= 0.0);
        pts.push_back(s);
        pts.push_back(r);
        links.push_back({2 * i, 2 * i + 1});
    }
    return Instance(MetricSpace::euclidean(std::move(pts)), std::move(links));
}

/// Adversarial instance for fixed power schemes: one long link w (id 0,
/// length D) and floor((D/3)^alpha) unit links (ids 1..m) whose senders all
/// sit at distance D/2 from s_w. Every other distance is the shortest-path
/// closure of those edges (a tree metric).
///
/// Points: s_w = 0, r_w = 1, s_v = 2k, r_v = 2k+1 for the k-th unit link.
inline Instance gen_linear_tight(double D, double alpha)
{
    if (!(D >= 3.0))
        throw std::invalid_argument("gen_linear_tight requires D >= 3");
    if (!(alpha > 0.0))
        throw std::invalid_argument("gen_linear_tight requires alpha > 0");
    const auto m = static_cast<std::size_t>(std::floor(std::pow(D / 3.0, alpha) + 1e-9));
    if (m < 1)
        throw std::invalid_argument("gen_linear_tight: (D/3)^alpha rounds down to zero links");

    const std::size_t pts = 2 + 2 * m;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(pts, std::vector<double>(pts, inf));
    for (std::size_t i = 0; i < pts; ++i)
        d[i][i] = 0.0;
    auto edge = [&](std::size_t a, std::size_t b, double len) { d[a][b] = d[b][a] = len; };
    edge(0, 1, D);
    for (std::size_t k = 1; k <= m; ++k) {
        edge(0, 2 * k, D / 2.0);
        edge(2 * k, 2 * k + 1, 1.0);
    }
    for (std::size_t k = 0; k < pts; ++k)
        for (std::size_t i = 0; i < pts; ++i)
            for (std::size_t j = 0; j < pts; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];

    std::vector<LinkEnds> links;
    links.push_back({0, 1});
    for (std::size_t k = 1; k <= m; ++k)
        links.push_back({2 * k, 2 * k + 1});
    return Instance(MetricSpace::matrix(d), std::move(links));
}

/// Malformed instance file; the message names the offending field.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::json to_json(const Instance& inst)
{
    nlohmann::json space;
    if (inst.space().kind() == MetricSpace::Kind::euclidean2d) {
        space["kind"] = "euclidean2d";
        auto& pts = space["points"] = nlohmann::json::array();
        for (const auto& p : inst.space().points())
            pts.push_back({p.x, p.y});
    } else {
        space["kind"] = "matrix";
        space["d"] = inst.space().distance_table();
    }
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : inst.links())
        links.push_back({{"s", l.sender}, {"r", l.receiver}});
    return {{"space", space}, {"links", links}};
}

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object())
        throw FormatError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(path + "." + key + ": missing");
    return *it;
}

inline double number(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number())
        throw FormatError(path + ": expected a number");
    return j.get<double>();
}

inline std::size_t index(const nlohmann::json& j, const std::string& path)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw FormatError(path + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

} // namespace detail

/// Parses and validates an instance document. Structural problems raise
/// FormatError; metric or link invariant violations raise MetricError.
inline Instance from_json(const nlohmann::json& doc)
{
    using detail::field;
    const auto& space = field(doc, "space", "$");
    const auto& kind = field(space, "kind", "$.space");
    if (!kind.is_string())
        throw FormatError("$.space.kind: expected a string");
    const auto kind_s = kind.get<std::string>();

    auto build_space = [&]() {
        if (kind_s == "euclidean2d") {
            const auto& pts = field(space, "points", "$.space");
            if (!pts.is_array())
                throw FormatError("$.space.points: expected an array");
            std::vector<Point> points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string p = "$.space.points[" + std::to_string(i) + "]";
                if (!pts[i].is_array() || pts[i].size() != 2)
                    throw FormatError(p + ": expected [x, y]");
                points.push_back({detail::number(pts[i][0], p + "[0]"), detail::number(pts[i][1], p + "[1]")});
            }
            return MetricSpace::euclidean(std::move(points));
        }
        if (kind_s == "matrix") {
            const auto& rows = field(space, "d", "$.space");
            if (!rows.is_array())
                throw FormatError("$.space.d: expected an array of rows");
            std::vector<std::vector<double>> table;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const std::string p = "$.space.d[" + std::to_string(i) + "]";
                if (!rows[i].is_array())
                    throw FormatError(p + ": expected an array");
                std::vector<double> row;
                for (std::size_t j = 0; j < rows[i].size(); ++j)
                    row.push_back(detail::number(rows[i][j], p + "[" + std::to_string(j) + "]"));
                table.push_back(std::move(row));
            }
            return MetricSpace::matrix(table);
        }
        throw FormatError("$.space.kind: unknown kind '" + kind_s + "'");
    };
    MetricSpace ms = build_space();

    const auto& links_j = field(doc, "links", "$");
    if (!links_j.is_array())
        throw FormatError("$.links: expected an array");
    std::vector<LinkEnds> links;
    for (std::size_t i = 0; i < links_j.size(); ++i) {
        const std::string p = "$.links[" + std::to_string(i) + "]";
        links.push_back({detail::index(field(links_j[i], "s", p), p + ".s"),
                         detail::index(field(links_j[i], "r", p), p + ".r")});
    }
    return Instance(std::move(ms), std::move(links));
}

inline void save(const Instance& inst, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << to_json(inst).dump(1) << '\n';
}

inline Instance load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return from_json(doc);
}

} // namespace sinrcap
