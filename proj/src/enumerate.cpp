#include "relutope/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "parallel.hpp"
#include "relutope/error.hpp"

namespace relutope {

DecompositionAtlas::DecompositionAtlas(std::vector<Region> regions,
                                       std::vector<std::pair<BitVector, BitVector>> edges,
                                       std::optional<BoxRegion> box)
    : regions_(std::move(regions)), box_(std::move(box)) {
    std::sort(regions_.begin(), regions_.end(), [](const Region& a, const Region& b) { return a.bits < b.bits; });
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        if (!index_.emplace(regions_[i].bits, i).second) {
            throw Error(ErrorKind::internal, "duplicate region " + regions_[i].bits.to_string());
        }
    }
    for (const auto& [a, b] : edges) {
        const auto ia = find(a);
        const auto ib = find(b);
        if (!ia || !ib) throw Error(ErrorKind::internal, "edge endpoint is not a region of the atlas");
        edges_.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::optional<std::size_t> DecompositionAtlas::find(const BitVector& bits) const {
    const auto it = index_.find(bits);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

DecompositionAtlas enumerate_brute(const NetworkSpec& net, const std::optional<BoxRegion>& box,
                                   const EnumerateOptions& options) {
    const std::size_t h = net.hidden_count();
    if (h > options.max_brute_bits || h >= 63) {
        throw Error(ErrorKind::resource_cap, "brute-force enumeration over 2^" + std::to_string(h) +
                                                 " bit vectors exceeds the limit of 2^" +
                                                 std::to_string(options.max_brute_bits));
    }
    if (box) box->validate(net.input_dim());

    const std::uint64_t total = std::uint64_t{1} << h;
    const std::uint64_t chunks = std::min<std::uint64_t>(total, 1024);
    std::vector<std::vector<Region>> found(chunks);
    detail::parallel_for(chunks, options.threads, [&](std::size_t chunk) {
        const std::uint64_t begin = total * chunk / chunks;
        const std::uint64_t end = total * (chunk + 1) / chunks;
        for (std::uint64_t code = begin; code < end; ++code) {
            BitVector bits(h);
            for (std::size_t i = 0; i < h; ++i) {
                if ((code >> i) & 1u) bits.set(i);
            }
            if (auto region = try_region(net, bits, box, options.tol)) found[chunk].push_back(*std::move(region));
        }
    });
    std::vector<Region> regions;
    for (auto& part : found) std::move(part.begin(), part.end(), std::back_inserter(regions));

    // Candidate pairs differ in one bit; keep those whose common hyperplane piece is (m-1)-dimensional.
    std::unordered_map<BitVector, std::size_t, BitVectorHash> index;
    for (std::size_t i = 0; i < regions.size(); ++i) index.emplace(regions[i].bits, i);
    std::vector<std::vector<std::pair<BitVector, BitVector>>> edge_parts(regions.size());
    detail::parallel_for(regions.size(), options.threads, [&](std::size_t i) {
        for (std::size_t k = 0; k < h; ++k) {
            const BitVector other = regions[i].bits.flipped(k);
            const auto it = index.find(other);
            if (it == index.end() || !(regions[i].bits < other)) continue;
            const auto facet = shared_facet(regions[i], regions[it->second], k, options.tol);
            if (facet && facet->radius > options.tol.dim) edge_parts[i].emplace_back(regions[i].bits, other);
        }
    });
    std::vector<std::pair<BitVector, BitVector>> edges;
    for (auto& part : edge_parts) std::move(part.begin(), part.end(), std::back_inserter(edges));
    return DecompositionAtlas(std::move(regions), std::move(edges), box);
}

DecompositionAtlas enumerate_traverse(const NetworkSpec& net, const Eigen::VectorXd& seed,
                                      const std::optional<BoxRegion>& box, const EnumerateOptions& options) {
    if (static_cast<std::size_t>(seed.size()) != net.input_dim()) {
        throw Error(ErrorKind::dimension_mismatch, "seed has length " + std::to_string(seed.size()) +
                                                       ", network expects " + std::to_string(net.input_dim()));
    }
    if (box) {
        box->validate(net.input_dim());
        if (!box->contains(seed)) throw Error(ErrorKind::infeasible, "seed point lies outside the box");
    }

    // A seed on a hyperplane is redrawn: uniformly in the box, or a unit Gaussian step otherwise.
    std::mt19937_64 rng(options.seed);
    Eigen::VectorXd start = seed;
    std::optional<Region> first;
    for (int attempt = 0; attempt <= 100; ++attempt) {
        const ActivationPattern pattern = activation_pattern(net, start, options.tol.bit);
        if (pattern.min_abs_pre_activation > options.tol.bit) {
            first = try_region(net, pattern.bits, box, options.tol);
            if (first) break;
        }
        if (attempt == 100) break;
        for (Eigen::Index j = 0; j < start.size(); ++j) {
            if (box) {
                std::uniform_real_distribution<double> u(box->lower(j), box->upper(j));
                start(j) = u(rng);
            } else {
                std::normal_distribution<double> g(0.0, 1.0);
                start(j) = seed(j) + g(rng);
            }
        }
    }
    if (!first) throw Error(ErrorKind::degenerate, "no generic seed point found after 100 redraws");

    std::vector<Region> regions;
    std::vector<std::pair<BitVector, BitVector>> candidate_edges;
    std::unordered_set<BitVector, BitVectorHash> seen{first->bits};
    std::vector<std::optional<Region>> level;
    level.push_back(std::move(first));

    // Level-synchronous FIFO: every discovered bit vector is built once, expanded once.
    while (!level.empty()) {
        std::vector<BitVector> next_bits;
        for (auto& slot : level) {
            if (!slot) continue;
            for (std::size_t bit : slot->active_bits) {
                BitVector nb = slot->bits.flipped(bit);
                candidate_edges.emplace_back(slot->bits, nb);
                if (seen.insert(nb).second) next_bits.push_back(std::move(nb));
            }
            regions.push_back(*std::move(slot));
        }
        level.assign(next_bits.size(), std::nullopt);
        detail::parallel_for(next_bits.size(), options.threads,
                             [&](std::size_t i) { level[i] = try_region(net, next_bits[i], box, options.tol); });
    }

    std::unordered_set<BitVector, BitVectorHash> present;
    for (const Region& r : regions) present.insert(r.bits);
    std::vector<std::pair<BitVector, BitVector>> edges;
    for (auto& e : candidate_edges) {
        if (present.count(e.first) && present.count(e.second)) edges.push_back(std::move(e));
    }
    return DecompositionAtlas(std::move(regions), std::move(edges), box);
}

DualGraph dual_graph(const DecompositionAtlas& atlas) {
    DualGraph g;
    g.vertex_count = atlas.size();
    g.edges = atlas.edges();
    g.color.reserve(atlas.size());
    for (const Region& r : atlas.regions()) {
        const int parity = static_cast<int>(r.bits.popcount() & 1u);
        g.color.push_back(parity);
        (parity == 0 ? g.even_count : g.odd_count) += 1;
    }
    for (const auto& [a, b] : g.edges) {
        if (g.color[a] == g.color[b]) {
            throw Error(ErrorKind::internal, "dual graph edge " + atlas.regions()[a].bits.to_string() + " -- " +
                                                 atlas.regions()[b].bits.to_string() +
                                                 " joins regions of equal parity");
        }
    }
    return g;
}

void write_atlas(const DecompositionAtlas& atlas, std::ostream& regions_out, std::ostream& edges_out) {
    for (const Region& r : atlas.regions()) {
        nlohmann::json line;
        line["bits"] = r.bits.to_string();
        line["active_bits"] = r.active_bits;
        line["boundary_flag"] = r.hits_boundary;
        regions_out << line.dump() << '\n';
    }
    for (const auto& [a, b] : atlas.edges()) {
        edges_out << atlas.regions()[a].bits.to_string() << ' ' << atlas.regions()[b].bits.to_string() << '\n';
    }
}

}  // namespace relutope
