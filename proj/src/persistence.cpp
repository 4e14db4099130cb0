#include "relutope/persistence.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "json.hpp"
#include "parallel.hpp"
#include "relutope/error.hpp"

namespace relutope {

namespace {

struct Entry {
    double value;
    std::uint64_t key;
    std::uint8_t dim;
};

bool entry_less(const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.key < b.key;
}

using Column = std::vector<std::uint32_t>;

// Symmetric difference of two ascending columns.
void add_into(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    return v;
}

}  // namespace

std::vector<std::uint32_t> Filtration::vertices(std::size_t i) const {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(dims_[i]) + 1);
    std::uint64_t key = keys_[i];
    for (std::size_t k = out.size(); k-- > 0;) {
        out[k] = static_cast<std::uint32_t>(key % vertex_count_);
        key /= vertex_count_;
    }
    return out;
}

Filtration build_filtration(const DistanceMatrix& d, int max_dim, std::optional<double> t_max,
                            std::size_t simplex_cap, unsigned threads) {
    if (max_dim < 0) throw Error(ErrorKind::usage, "max_dim must be non-negative");
    const std::size_t n = d.size();
    if (n == 0) throw Error(ErrorKind::usage, "filtration of an empty distance matrix");
    const double threshold = t_max.value_or(d.max_finite());
    const std::size_t max_vertices = static_cast<std::size_t>(max_dim) + 2;
    simplex_cap = std::min<std::size_t>(simplex_cap, std::numeric_limits<std::uint32_t>::max() - 1);

    // Keys are base-N numbers with max_vertices digits.
    long double span = 1.0L;
    for (std::size_t k = 0; k < max_vertices; ++k) span *= static_cast<long double>(n);
    if (span >= 1.8e19L) {
        throw Error(ErrorKind::resource_cap, "too many points (" + std::to_string(n) + ") for max_dim " +
                                                 std::to_string(max_dim));
    }

    // Higher-indexed neighbours within the threshold, ascending.
    std::vector<std::vector<std::uint32_t>> up(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = d(i, j);
            if (std::isfinite(v) && v <= threshold) up[i].push_back(static_cast<std::uint32_t>(j));
        }
    }

    std::atomic<std::size_t> count{n};
    std::vector<std::vector<Entry>> parts(n);
    detail::parallel_for(n, threads, [&](std::size_t root) {
        std::vector<Entry>& out = parts[root];
        out.push_back(Entry{0.0, root, 0});
        if (max_vertices < 2) return;
        // Depth-first clique growth; cand holds common higher neighbours of the clique.
        struct Frame {
            std::uint64_t key;
            double diameter;
            std::vector<std::uint32_t> members;
            std::vector<std::uint32_t> cand;
        };
        std::vector<Frame> stack;
        stack.push_back(Frame{root, 0.0, {static_cast<std::uint32_t>(root)}, up[root]});
        while (!stack.empty()) {
            Frame frame = std::move(stack.back());
            stack.pop_back();
            for (std::size_t ci = 0; ci < frame.cand.size(); ++ci) {
                const std::uint32_t v = frame.cand[ci];
                double diameter = frame.diameter;
                for (std::uint32_t u : frame.members) diameter = std::max(diameter, d(u, v));
                const std::uint64_t key = frame.key * n + v;
                const auto dim = static_cast<std::uint8_t>(frame.members.size());
                out.push_back(Entry{diameter, key, dim});
                if (++count > simplex_cap) {
                    throw Error(ErrorKind::resource_cap, "filtration exceeds the cap of " +
                                                             std::to_string(simplex_cap) + " simplices");
                }
                if (frame.members.size() + 1 >= max_vertices) continue;
                std::vector<std::uint32_t> next;
                for (std::size_t cj = ci + 1; cj < frame.cand.size(); ++cj) {
                    const std::uint32_t w = frame.cand[cj];
                    if (std::binary_search(up[v].begin(), up[v].end(), w)) next.push_back(w);
                }
                if (next.empty()) continue;
                std::vector<std::uint32_t> members = frame.members;
                members.push_back(v);
                stack.push_back(Frame{key, diameter, std::move(members), std::move(next)});
            }
        }
    });

    std::vector<Entry> all;
    all.reserve(count.load());
    for (auto& p : parts) {
        all.insert(all.end(), p.begin(), p.end());
        std::vector<Entry>().swap(p);
    }
    std::sort(all.begin(), all.end(), entry_less);

    Filtration f;
    f.vertex_count_ = n;
    f.max_dim_ = max_dim;
    f.values_.reserve(all.size());
    f.keys_.reserve(all.size());
    f.dims_.reserve(all.size());
    for (const Entry& e : all) {
        f.values_.push_back(e.value);
        f.keys_.push_back(e.key);
        f.dims_.push_back(e.dim);
    }
    return f;
}

Barcode compute_barcodes(const Filtration& f) {
    const std::size_t total = f.size();
    const int top = f.max_dim() + 1;
    const std::uint64_t n = f.vertex_count();

    std::vector<std::vector<std::uint32_t>> by_dim(static_cast<std::size_t>(top) + 1);
    for (std::size_t i = 0; i < total; ++i) by_dim[f.dim(i)].push_back(static_cast<std::uint32_t>(i));

    // key -> position, per dimension below the top
    std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> lookup(static_cast<std::size_t>(top));
    for (int dim = 0; dim < top; ++dim) {
        auto& table = lookup[dim];
        table.reserve(by_dim[dim].size());
        for (std::uint32_t pos : by_dim[dim]) table.emplace_back(f.key(pos), pos);
        std::sort(table.begin(), table.end());
    }
    auto position_of = [&](int dim, std::uint64_t key) {
        const auto& table = lookup[dim];
        const auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(key, std::uint32_t{0}));
        return it->second;
    };

    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> pivot_owner(total, kNone);  // row -> column whose low it is
    std::vector<bool> negative(total, false);
    std::unordered_map<std::uint32_t, Column> reduced;

    Barcode barcode;
    barcode.dims.resize(static_cast<std::size_t>(f.max_dim()) + 1);

    Column col;
    Column scratch;
    std::vector<std::uint64_t> digits;
    for (int dim = 1; dim <= top; ++dim) {
        std::size_t open_classes = 0;
        if (dim == top) {
            for (std::uint32_t pos : by_dim[dim - 1]) {
                if (!negative[pos]) ++open_classes;
            }
        }
        for (std::uint32_t j : by_dim[dim]) {
            if (dim == top && open_classes == 0) break;
            // Boundary: drop one vertex at a time from the base-N key.
            const std::size_t k = static_cast<std::size_t>(dim) + 1;
            digits.assign(k, 0);
            std::uint64_t key = f.key(j);
            for (std::size_t t = k; t-- > 0;) {
                digits[t] = key % n;
                key /= n;
            }
            col.clear();
            for (std::size_t skip = 0; skip < k; ++skip) {
                std::uint64_t face = 0;
                for (std::size_t t = 0; t < k; ++t) {
                    if (t != skip) face = face * n + digits[t];
                }
                const std::uint32_t row = position_of(dim - 1, face);
                if (!negative[row]) col.push_back(row);
            }
            std::sort(col.begin(), col.end());

            while (!col.empty() && pivot_owner[col.back()] != kNone) {
                add_into(col, reduced.at(pivot_owner[col.back()]), scratch);
            }
            if (col.empty()) continue;
            const std::uint32_t low = col.back();
            pivot_owner[low] = j;
            negative[j] = true;
            barcode.dims[dim - 1].push_back(Interval{f.value(low), f.value(j)});
            if (dim == top) --open_classes;
            reduced.emplace(j, col);
        }
        if (dim == top) break;
        // Columns of this dimension are never added into the next one.
        for (std::uint32_t pos : by_dim[dim]) reduced.erase(pos);
    }

    for (std::size_t i = 0; i < total; ++i) {
        if (f.dim(i) < top && !negative[i] && pivot_owner[i] == kNone) {
            barcode.dims[f.dim(i)].push_back(Interval{f.value(i), std::numeric_limits<double>::infinity()});
        }
    }
    for (auto& bars : barcode.dims) std::sort(bars.begin(), bars.end());
    return barcode;
}

Barcode Barcode::without_zero_length() const {
    Barcode out;
    out.dims.resize(dims.size());
    for (std::size_t d = 0; d < dims.size(); ++d) {
        std::copy_if(dims[d].begin(), dims[d].end(), std::back_inserter(out.dims[d]),
                     [](const Interval& iv) { return iv.birth != iv.death; });
    }
    return out;
}

Barcode persistent_homology(const DistanceMatrix& d, int max_dim, std::optional<double> t_max, unsigned threads) {
    return compute_barcodes(build_filtration(d, max_dim, t_max, kDefaultSimplexCap, threads));
}

void export_lower_distance(const DistanceMatrix& d, std::ostream& out) {
    for (std::size_t i = 1; i < d.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (j > 0) out << ',';
            out << format_number(d(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed to write lower distance matrix");
}

DistanceMatrix read_lower_distance(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<double> values;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && (*p == ',' || *p == ' ' || *p == '\t')) ++p;
            if (p == end) break;
            double v = 0.0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc()) {
                throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": cannot parse a number at \"" +
                                                  std::string(p, std::min<std::ptrdiff_t>(end - p, 16)) + "\"");
            }
            values.push_back(v);
            p = res.ptr;
            if (p < end && *p != ',' && *p != ' ' && *p != '\t') {
                throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": unexpected character '" +
                                                  std::string(1, *p) + "'");
            }
        }
        if (values.empty()) continue;
        if (values.size() != rows.size() + 1) {
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(rows.size() + 1) + " values, found " +
                                              std::to_string(values.size()));
        }
        rows.push_back(std::move(values));
    }
    const std::size_t n = rows.size() + 1;
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            entries[i * n + j] = rows[i - 1][j];
            entries[j * n + i] = rows[i - 1][j];
        }
    }
    return DistanceMatrix(n, std::move(entries));
}

void write_barcode_json(const Barcode& barcode, std::ostream& out) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t d = 0; d < barcode.dims.size(); ++d) {
        nlohmann::json bars = nlohmann::json::array();
        for (const Interval& iv : barcode.dims[d]) {
            bars.push_back({json_number(iv.birth), iv.is_finite() ? json_number(iv.death) : nlohmann::json()});
        }
        doc.push_back({{"dim", d}, {"bars", bars}});
    }
    out << doc.dump() << '\n';
}

void write_barcode_table(const Barcode& barcode, std::ostream& out) {
    for (std::size_t d = 0; d < barcode.dims.size(); ++d) {
        out << "H" << d << ": " << barcode.dims[d].size() << " bars\n";
        for (const Interval& iv : barcode.dims[d]) {
            out << "  [" << format_number(iv.birth) << ", " << (iv.is_finite() ? format_number(iv.death) : "inf")
                << ")\n";
        }
    }
}

}  // namespace relutope
