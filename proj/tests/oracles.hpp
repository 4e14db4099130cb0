#pragma once

// Independent reference implementations used only by the tests. None of these
// call into the LP solver or the optimized persistence code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "relutope/metric.hpp"
#include "relutope/network.hpp"
#include "relutope/persistence.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline relutope::NetworkSpec random_network(std::mt19937_64& rng, std::size_t input_dim,
                                            const std::vector<std::size_t>& hidden, std::size_t output_dim = 1) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<relutope::Layer> layers;
    std::size_t prev = input_dim;
    auto make = [&](std::size_t rows) {
        relutope::Layer layer{MatrixXd(rows, prev), VectorXd(rows)};
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = g(rng);
            layer.bias(r) = g(rng);
        }
        prev = rows;
        return layer;
    };
    for (std::size_t w : hidden) layers.push_back(make(w));
    layers.push_back(make(output_dim));
    return relutope::NetworkSpec(std::move(layers));
}

inline VectorXd gaussian_point(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    VectorXd x(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    return x;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Regions of a generic arrangement of h hyperplanes in R^m.
inline std::uint64_t zaslavsky_count(std::uint64_t h, std::uint64_t m) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i <= m; ++i) total += binomial(h, i);
    return total;
}

// Number of rows of a 2-D system {a x <= c} that support an edge of positive
// length. Each row's line is clipped by every other row in closed form.
inline std::size_t facet_count_2d(const MatrixXd& a, const VectorXd& c, double eps = 1e-9) {
    std::size_t facets = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const Eigen::Vector2d n = a.row(i).transpose();
        if (n.norm() == 0.0) continue;
        bool duplicate = false;
        for (Eigen::Index j = 0; j < i && !duplicate; ++j) duplicate = a.row(j) == a.row(i) && c(j) == c(i);
        if (duplicate) continue;
        const Eigen::Vector2d p = n * (c(i) / n.squaredNorm());
        const Eigen::Vector2d d(-n.y(), n.x());
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        bool empty = false;
        for (Eigen::Index j = 0; j < a.rows(); ++j) {
            if (j == i) continue;
            const double slope = a.row(j).dot(d);
            const double room = c(j) - a.row(j).dot(p);
            if (std::abs(slope) < 1e-14) {
                if (room < -eps) empty = true;
                continue;
            }
            if (slope > 0) {
                hi = std::min(hi, room / slope);
            } else {
                lo = std::max(lo, room / slope);
            }
        }
        if (!empty && hi - lo > eps * d.norm()) ++facets;
    }
    return facets;
}

// Vertices of a bounded 2-D polygon {a x <= c}, from all pairwise line intersections.
inline std::vector<Eigen::Vector2d> polygon_vertices(const MatrixXd& a, const VectorXd& c, double eps = 1e-9) {
    std::vector<Eigen::Vector2d> out;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < a.rows(); ++j) {
            Eigen::Matrix2d m;
            m.row(0) = a.row(i);
            m.row(1) = a.row(j);
            if (std::abs(m.determinant()) < 1e-12) continue;
            const Eigen::Vector2d v = m.partialPivLu().solve(Eigen::Vector2d(c(i), c(j)));
            if (((a * v - c).array() <= eps).all()) out.push_back(v);
        }
    }
    return out;
}

// Kruskal on the finite entries <= t_max; returns the tree edge weights.
inline std::vector<double> mst_weights(const relutope::DistanceMatrix& d, double t_max) {
    struct Edge {
        double w;
        std::size_t i, j;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (d(i, j) <= t_max) edges.push_back({d(i, j), i, j});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });
    std::vector<std::size_t> parent(d.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = root(parent[v]);
    };
    std::vector<double> out;
    for (const Edge& e : edges) {
        const std::size_t a = root(e.i), b = root(e.j);
        if (a != b) {
            parent[a] = b;
            out.push_back(e.w);
        }
    }
    return out;
}

inline std::size_t component_count(const relutope::DistanceMatrix& d, double t_max) {
    return d.size() - mst_weights(d, t_max).size();
}

// Textbook persistence: list every clique by subset enumeration, sort, reduce
// the full boundary matrix column by column with no shortcuts.
inline relutope::Barcode naive_barcodes(const relutope::DistanceMatrix& d, int max_dim,
                                        std::optional<double> t_max = std::nullopt) {
    const std::size_t n = d.size();
    const double limit = t_max.value_or(d.max_finite());
    struct Simplex {
        std::vector<std::size_t> v;
        double value;
    };
    std::vector<Simplex> simplices;
    const std::size_t max_size = static_cast<std::size_t>(max_dim) + 2;
    std::vector<std::size_t> current;
    std::function<void(std::size_t, double)> grow = [&](std::size_t next, double diameter) {
        if (!current.empty()) simplices.push_back({current, diameter});
        if (current.size() == max_size) return;
        for (std::size_t u = next; u < n; ++u) {
            double dia = diameter;
            for (std::size_t w : current) dia = std::max(dia, d(w, u));
            if (dia > limit) continue;
            current.push_back(u);
            grow(u + 1, dia);
            current.pop_back();
        }
    };
    grow(0, 0.0);
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
        return a.v < b.v;
    });
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < simplices.size(); ++i) index[simplices[i].v] = i;

    std::vector<std::vector<std::size_t>> columns(simplices.size());
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        const auto& v = simplices[i].v;
        if (v.size() < 2) continue;
        for (std::size_t skip = 0; skip < v.size(); ++skip) {
            std::vector<std::size_t> face;
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k != skip) face.push_back(v[k]);
            }
            columns[i].push_back(index.at(face));
        }
        std::sort(columns[i].begin(), columns[i].end());
    }
    std::map<std::size_t, std::size_t> low_owner;
    std::vector<bool> paired(simplices.size(), false);
    relutope::Barcode out;
    out.dims.resize(static_cast<std::size_t>(max_dim) + 1);
    for (std::size_t j = 0; j < simplices.size(); ++j) {
        auto& col = columns[j];
        while (!col.empty()) {
            const auto it = low_owner.find(col.back());
            if (it == low_owner.end()) break;
            std::vector<std::size_t> sum;
            std::set_symmetric_difference(col.begin(), col.end(), columns[it->second].begin(),
                                          columns[it->second].end(), std::back_inserter(sum));
            col = std::move(sum);
        }
        if (!col.empty()) {
            const std::size_t low = col.back();
            low_owner[low] = j;
            paired[low] = paired[j] = true;
            const std::size_t dim = simplices[low].v.size() - 1;
            if (dim <= static_cast<std::size_t>(max_dim)) {
                out.dims[dim].push_back({simplices[low].value, simplices[j].value});
            }
        }
    }
    for (std::size_t j = 0; j < simplices.size(); ++j) {
        const std::size_t dim = simplices[j].v.size() - 1;
        if (!paired[j] && columns[j].empty() && dim <= static_cast<std::size_t>(max_dim)) {
            out.dims[dim].push_back({simplices[j].value, std::numeric_limits<double>::infinity()});
        }
    }
    for (auto& bars : out.dims) std::sort(bars.begin(), bars.end());
    return out;
}

inline relutope::DistanceMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t n, int max_value) {
    std::uniform_int_distribution<int> u(1, max_value);
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) e[i * n + j] = e[j * n + i] = u(rng);
    }
    return relutope::DistanceMatrix(n, std::move(e));
}

// Bottleneck distance between two finite-or-infinite diagrams, by trying each
// candidate radius with a bipartite matching that may send points to the diagonal.
inline double bottleneck(const std::vector<relutope::Interval>& x, const std::vector<relutope::Interval>& y) {
    auto cost = [](const relutope::Interval& a, const relutope::Interval& b) {
        if (a.is_finite() != b.is_finite()) return std::numeric_limits<double>::infinity();
        const double db = std::abs(a.birth - b.birth);
        return a.is_finite() ? std::max(db, std::abs(a.death - b.death)) : db;
    };
    auto to_diag = [](const relutope::Interval& a) {
        return a.is_finite() ? a.length() / 2 : std::numeric_limits<double>::infinity();
    };
    std::vector<double> candidates{0.0};
    for (const auto& a : x) {
        candidates.push_back(to_diag(a));
        for (const auto& b : y) candidates.push_back(cost(a, b));
    }
    for (const auto& b : y) candidates.push_back(to_diag(b));
    std::sort(candidates.begin(), candidates.end());
    const std::size_t nx = x.size(), ny = y.size(), total = nx + ny;
    for (double r : candidates) {
        // Left: x points then y-diagonal copies. Right: y points then x-diagonal copies.
        auto ok = [&](std::size_t l, std::size_t rr) {
            if (l < nx && rr < ny) return cost(x[l], y[rr]) <= r;
            if (l < nx) return rr - ny == l && to_diag(x[l]) <= r;
            if (rr < ny) return l - nx == rr && to_diag(y[rr]) <= r;
            return true;
        };
        std::vector<std::ptrdiff_t> match(total, -1);
        std::size_t matched = 0;
        for (std::size_t l = 0; l < total; ++l) {
            std::vector<bool> seen(total, false);
            std::function<bool(std::size_t)> augment = [&](std::size_t u) {
                for (std::size_t v = 0; v < total; ++v) {
                    if (seen[v] || !ok(u, v)) continue;
                    seen[v] = true;
                    if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]))) {
                        match[v] = static_cast<std::ptrdiff_t>(u);
                        return true;
                    }
                }
                return false;
            };
            if (augment(l)) ++matched;
        }
        if (matched == total) return r;
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace oracle
