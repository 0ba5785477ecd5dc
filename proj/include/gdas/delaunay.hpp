#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdas/errors.hpp"
#include "gdas/graph.hpp"

namespace gdas {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct DelaunayResult {
    // Unique undirected edges, a < b, lexicographic order.
    std::vector<std::pair<NodeId, NodeId>> edges;
    // In-circle ties between real points (4 near-cocircular points); broken
    // deterministically by keeping the earlier-inserted configuration.
    std::size_t cocircular_ties = 0;
};

namespace delaunay_detail {

// Tie band for the in-circle determinant on unit-box coordinates. Anything
// inside the band counts as "on the circle" and never triggers a re-fill,
// which is what breaks cocircular quadruples in insertion-index order.
inline constexpr double kInCircleTie = 1e-12;

struct Tri {
    std::array<int, 3> v;
    bool alive = true;
};

// The super-triangle is taken in its far limit: three virtual vertices at
// infinity in fixed directions 120 degrees apart. Triangles touching a
// virtual vertex act as half-planes in the in-circle test, so the hull is
// never distorted by a finite bounding triangle.
inline const std::array<Point2, 3>& virtual_directions() {
    static const std::array<Point2, 3> dirs = [] {
        std::array<Point2, 3> d{};
        const double base = 1.0; // radians; avoids axis-parallel degeneracy
        for (int k = 0; k < 3; ++k) {
            const double a = base + 2.0 * std::numbers::pi * k / 3.0;
            d[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
        }
        return d;
    }();
    return dirs;
}

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Strictly-inside test of p against the circumcircle of (a, b, c), all real.
// Returns +1 inside, 0 within the tie band, -1 outside.
inline int in_circle_real(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
    const double adx = a.x - p.x, ady = a.y - p.y;
    const double bdx = b.x - p.x, bdy = b.y - p.y;
    const double cdx = c.x - p.x, cdy = c.y - p.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                 ad * (bdx * cdy - bdy * cdx);
    const double orient = cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
    if (orient < 0.0) det = -det;
    if (std::abs(det) <= kInCircleTie) return 0;
    return det > 0.0 ? 1 : -1;
}

class Builder {
public:
    explicit Builder(std::span<const Point2> pts) : n_(static_cast<int>(pts.size())) {
        // Normalize into the unit box so the tolerance has fixed meaning.
        double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
        for (const Point2& p : pts) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        const double extent = std::max(max_x - min_x, max_y - min_y);
        const double inv = extent > 0.0 ? 1.0 / extent : 1.0;
        pts_.reserve(pts.size());
        for (const Point2& p : pts) pts_.push_back({(p.x - min_x) * inv, (p.y - min_y) * inv});

        tris_.push_back({{n_, n_ + 1, n_ + 2}, true});
        for (int i = 0; i < n_; ++i) insert(i);
    }

    DelaunayResult take_result() {
        DelaunayResult out;
        out.cocircular_ties = ties_;
        std::vector<std::pair<NodeId, NodeId>>& edges = out.edges;
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= n_ || t.v[1] >= n_ || t.v[2] >= n_) continue;
            for (int k = 0; k < 3; ++k) {
                int a = t.v[static_cast<std::size_t>(k)];
                int b = t.v[static_cast<std::size_t>((k + 1) % 3)];
                if (a > b) std::swap(a, b);
                edges.emplace_back(a, b);
            }
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return out;
    }

private:
    bool is_virtual(int v) const { return v >= n_; }

    // Does the (possibly unbounded) circumdisc of triangle t contain point p?
    bool disc_contains(const Tri& t, const Point2& p) {
        std::array<int, 3> virt{}, real{};
        int nv = 0, nr = 0;
        for (int v : t.v)
            (is_virtual(v) ? virt[static_cast<std::size_t>(nv++)]
                           : real[static_cast<std::size_t>(nr++)]) = v;
        if (nv == 0) {
            const int r = in_circle_real(pts_[static_cast<std::size_t>(real[0])],
                                         pts_[static_cast<std::size_t>(real[1])],
                                         pts_[static_cast<std::size_t>(real[2])], p);
            if (r == 0) ++ties_;
            return r > 0;
        }
        if (nv == 1) {
            // Half-plane through the two real vertices, open toward the
            // virtual direction.
            const Point2& u = pts_[static_cast<std::size_t>(real[0])];
            const Point2& w = pts_[static_cast<std::size_t>(real[1])];
            const Point2& d = virtual_directions()[static_cast<std::size_t>(virt[0] - n_)];
            const double side_p = cross(w.x - u.x, w.y - u.y, p.x - u.x, p.y - u.y);
            const double side_d = cross(w.x - u.x, w.y - u.y, d.x, d.y);
            if (std::abs(side_p) <= kInCircleTie || std::abs(side_d) <= kInCircleTie)
                return false;
            return (side_p > 0.0) == (side_d > 0.0);
        }
        if (nv == 2) {
            // Half-plane through the single real vertex, opening along the
            // bisector of the two virtual directions.
            const Point2& u = pts_[static_cast<std::size_t>(real[0])];
            const Point2& da = virtual_directions()[static_cast<std::size_t>(virt[0] - n_)];
            const Point2& db = virtual_directions()[static_cast<std::size_t>(virt[1] - n_)];
            const double mx = da.x + db.x, my = da.y + db.y;
            return (p.x - u.x) * mx + (p.y - u.y) * my > kInCircleTie;
        }
        return true; // all-virtual root triangle covers the plane
    }

    void insert(int pi) {
        const Point2& p = pts_[static_cast<std::size_t>(pi)];
        std::vector<std::size_t> bad;
        for (std::size_t ti = 0; ti < tris_.size(); ++ti)
            if (tris_[ti].alive && disc_contains(tris_[ti], p)) bad.push_back(ti);

        // Cavity boundary: directed edges of bad triangles whose undirected
        // pair occurs exactly once.
        std::map<std::pair<int, int>, std::pair<int, std::pair<int, int>>> count;
        for (std::size_t ti : bad) {
            const Tri& t = tris_[ti];
            for (int k = 0; k < 3; ++k) {
                const int a = t.v[static_cast<std::size_t>(k)];
                const int b = t.v[static_cast<std::size_t>((k + 1) % 3)];
                auto& slot = count[{std::min(a, b), std::max(a, b)}];
                ++slot.first;
                slot.second = {a, b};
            }
        }
        for (std::size_t ti : bad) tris_[ti].alive = false;
        for (const auto& [key, slot] : count) {
            if (slot.first != 1) continue;
            tris_.push_back({{slot.second.first, slot.second.second, pi}, true});
        }
    }

    int n_;
    std::vector<Point2> pts_;
    std::vector<Tri> tris_;
    std::size_t ties_ = 0;
};

} // namespace delaunay_detail

// Delaunay triangulation edge set via incremental Bowyer-Watson insertion
// (index order) under a super-triangle taken at infinity. Requires at least
// three points, no duplicates, not all collinear.
inline DelaunayResult delaunay_edges(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n < 3) throw argument_error("delaunay_edges: need at least 3 points");

    {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (points[a].x != points[b].x) return points[a].x < points[b].x;
            return points[a].y < points[b].y;
        });
        for (std::size_t i = 1; i < n; ++i) {
            const Point2& a = points[order[i - 1]];
            const Point2& b = points[order[i]];
            if (a.x == b.x && a.y == b.y)
                throw argument_error("delaunay_edges: duplicate points at indices " +
                                     std::to_string(order[i - 1]) + " and " +
                                     std::to_string(order[i]));
        }
    }

    {
        // Collinearity: widest pair as baseline, test every cross product.
        double scale = 0.0;
        std::size_t far_idx = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const double dx = points[i].x - points[0].x;
            const double dy = points[i].y - points[0].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > scale) {
                scale = d2;
                far_idx = i;
            }
        }
        const double bx = points[far_idx].x - points[0].x;
        const double by = points[far_idx].y - points[0].y;
        double max_cross = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            max_cross = std::max(max_cross,
                                 std::abs(delaunay_detail::cross(
                                     bx, by, points[i].x - points[0].x,
                                     points[i].y - points[0].y)));
        if (max_cross <= 1e-12 * scale)
            throw argument_error("delaunay_edges: all points are collinear");
    }

    delaunay_detail::Builder builder(points);
    return builder.take_result();
}

} // namespace gdas
