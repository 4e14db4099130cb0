#include "relutope/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relutope/enumerate.hpp"
#include "relutope/error.hpp"
#include "relutope/metric.hpp"
#include "relutope/network.hpp"
#include "relutope/persistence.hpp"
#include "relutope/regions.hpp"
#include "relutope/sampling.hpp"

namespace relutope {

namespace {

struct GlobalConfig {
    Tolerances tol;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Output target: a file, or the caller's stream for "-" / empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) throw Error(ErrorKind::io, "write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    return in;
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& what) {
    std::vector<double> values;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        double v = 0.0;
        const auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc()) throw Error(ErrorKind::usage, "cannot parse " + what + " \"" + text + "\"");
        values.push_back(v);
        p = res.ptr;
        if (p < end) {
            if (*p != ',') throw Error(ErrorKind::usage, "cannot parse " + what + " \"" + text + "\"");
            ++p;
        }
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<BitVector> read_bit_lines(std::istream& in) {
    std::vector<BitVector> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.push_back(BitVector::from_string(line));
        } catch (const Error& e) {
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

DistanceMatrix read_ldm_file(const std::string& path) {
    auto in = open_input(path);
    return read_lower_distance(in);
}

// Full square matrix, one row per line, comma or blank separated.
DistanceMatrix read_square_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        std::vector<double> row;
        std::string token;
        while (ls >> token) {
            double v = 0.0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
            if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
                throw Error(ErrorKind::parse, "line " + std::to_string(rows.size() + 1) + ": bad number \"" + token +
                                                  "\"");
            }
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw Error(ErrorKind::parse, "line " + std::to_string(i + 1) + ": expected " + std::to_string(n) +
                                              " values");
        }
        entries.insert(entries.end(), rows[i].begin(), rows[i].end());
    }
    return DistanceMatrix(n, std::move(entries));
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return exit_usage;
        case ErrorKind::parse:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::non_finite:
        case ErrorKind::io: return exit_input_format;
        case ErrorKind::infeasible:
        case ErrorKind::degenerate: return exit_infeasible;
        case ErrorKind::resource_cap: return exit_resource_cap;
        case ErrorKind::iteration_limit:
        case ErrorKind::internal: return exit_internal;
    }
    return exit_internal;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polyhedral decompositions of ReLU networks and persistent homology of activation patterns",
                 "relutope"};
    app.require_subcommand(1);

    GlobalConfig cfg;
    app.add_option("--tau-lp", cfg.tol.lp, "LP feasibility/optimality tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tau-dim", cfg.tol.dim, "Chebyshev radius threshold for full dimension")
        ->check(CLI::PositiveNumber);
    app.add_option("--tau-bit", cfg.tol.bit, "pre-activations with |z| <= tau count as zero")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for every random draw");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);

    // bits
    std::string net_path, points_path, out_path;
    auto* bits = app.add_subcommand("bits", "activation bit vector of each input point, one per line");
    bits->add_option("--net", net_path, "weight file")->required();
    bits->add_option("--points", points_path, "points file")->required();
    bits->add_option("-o,--out", out_path, "output file");

    // enumerate
    std::string mode = "traverse", lower_text, upper_text, seed_text, prefix;
    std::size_t max_brute_bits = 24;
    auto* enumerate = app.add_subcommand("enumerate", "enumerate all regions and their adjacency");
    enumerate->add_option("--net", net_path, "weight file")->required();
    enumerate->add_option("--mode", mode, "brute or traverse")->check(CLI::IsMember({"brute", "traverse"}));
    enumerate->add_option("--lower", lower_text, "box lower corner, comma separated");
    enumerate->add_option("--upper", upper_text, "box upper corner, comma separated");
    enumerate->add_option("--seed-point", seed_text, "traversal start point (default: box center or origin)");
    enumerate->add_option("--max-brute-bits", max_brute_bits, "largest h allowed in brute mode");
    enumerate->add_option("--out", prefix, "writes PREFIX.regions.jsonl and PREFIX.edges.txt")->required();

    // region
    std::string point_text;
    auto* region = app.add_subcommand("region", "dump the region containing a point");
    region->add_option("--net", net_path, "weight file")->required();
    region->add_option("--point", point_text, "comma separated coordinates")->required();
    region->add_option("-o,--out", out_path, "output file");

    // distmat
    std::string bits_path, labels_path;
    bool dedup = false;
    bool euclidean = false;
    auto* distmat = app.add_subcommand("distmat", "distance matrix in lower-triangular CSV");
    auto* bits_opt = distmat->add_option("--bits", bits_path, "bit-vector file (Hamming distances)");
    auto* points_opt = distmat->add_option("--points", points_path, "points file (with --euclidean)");
    bits_opt->excludes(points_opt);
    distmat->add_flag("--euclidean", euclidean, "Euclidean distances between points");
    distmat->add_flag("--dedup", dedup, "keep one row per distinct bit vector");
    distmat->add_option("--labels", labels_path, "write row labels here, one per line");
    distmat->add_option("-o,--out", out_path, "output file");

    // combine
    std::string a_path, b_path, op = "min";
    auto* combine_cmd = app.add_subcommand("combine", "entrywise min or max of two matrices");
    combine_cmd->add_option("--a", a_path, "first matrix")->required();
    combine_cmd->add_option("--b", b_path, "second matrix")->required();
    combine_cmd->add_option("--op", op, "min or max")->check(CLI::IsMember({"min", "max"}));
    combine_cmd->add_option("-o,--out", out_path, "output file");

    // persist
    std::string matrix_path, text_path;
    int max_dim = 1;
    std::optional<double> t_max;
    bool include_zero = false;
    auto* persist = app.add_subcommand("persist", "Vietoris-Rips barcodes of a lower-triangular matrix");
    persist->add_option("--matrix", matrix_path, "lower-triangular CSV")->required();
    persist->add_option("--max-dim", max_dim, "highest homology dimension")->check(CLI::NonNegativeNumber);
    persist->add_option("--t-max", t_max, "largest filtration value");
    persist->add_flag("--include-zero", include_zero, "keep zero-length intervals");
    persist->add_option("--text", text_path, "also write a plain-text table here");
    persist->add_option("-o,--out", out_path, "barcode JSON output");

    // export-ldm
    auto* export_ldm = app.add_subcommand("export-ldm", "convert a full square matrix to lower-triangular CSV");
    export_ldm->add_option("--matrix", matrix_path, "square matrix, one row per line")->required();
    export_ldm->add_option("-o,--out", out_path, "output file");

    // sampling
    std::string anchors_path;
    std::optional<std::size_t> offset_index;
    std::size_t count = 0, n1 = 10, n2 = 10, uniform_count = 0, dim = 0;
    double theta0 = 0.0, theta1 = 2.0 * std::numbers::pi, alpha = 1.0;
    auto* circle = app.add_subcommand("sample-circle", "evenly spaced samples of offset + alpha(sin t A1 + cos t A2)");
    circle->add_option("--anchors", anchors_path, "anchor file")->required();
    circle->add_option("--offset-index", offset_index, "anchor used as additive center");
    circle->add_option("--count", count, "number of samples")->required()->check(CLI::PositiveNumber);
    circle->add_option("--theta0", theta0, "start of the parameter interval");
    circle->add_option("--theta1", theta1, "end of the parameter interval (excluded)");
    circle->add_option("--alpha", alpha, "scale");
    circle->add_option("-o,--out", out_path, "points output");

    auto* torus = app.add_subcommand("sample-torus", "grid or uniform samples of a torus curve family");
    torus->add_option("--anchors", anchors_path, "anchor file")->required();
    torus->add_option("--offset-index", offset_index, "anchor used as additive center");
    torus->add_option("--n1", n1, "grid size in theta1")->check(CLI::PositiveNumber);
    torus->add_option("--n2", n2, "grid size in theta2")->check(CLI::PositiveNumber);
    torus->add_option("--uniform", uniform_count, "draw this many uniform angle pairs instead of a grid");
    torus->add_option("--alpha", alpha, "scale");
    torus->add_option("-o,--out", out_path, "points output");

    auto* anchors = app.add_subcommand("gen-anchors", "seeded orthonormal anchor vectors");
    anchors->add_option("--dim", dim, "vector length")->required()->check(CLI::PositiveNumber);
    anchors->add_option("--count", count, "number of vectors")->required()->check(CLI::PositiveNumber);
    anchors->add_option("-o,--out", out_path, "anchor output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*bits) {
            const NetworkSpec net = load_network_file(net_path);
            const auto points = read_points_file(points_path);
            Sink sink(out_path, out);
            for (const auto& p : points) sink.get() << bit_vector(net, p, cfg.tol.bit).to_string() << '\n';
            sink.close();
        } else if (*enumerate) {
            const NetworkSpec net = load_network_file(net_path);
            std::optional<BoxRegion> box;
            if (!lower_text.empty() || !upper_text.empty()) {
                if (lower_text.empty() || upper_text.empty()) {
                    throw Error(ErrorKind::usage, "--lower and --upper must be given together");
                }
                box = BoxRegion{parse_vector(lower_text, "--lower"), parse_vector(upper_text, "--upper")};
                box->validate(net.input_dim());
            }
            EnumerateOptions options;
            options.tol = cfg.tol;
            options.seed = cfg.seed;
            options.threads = cfg.threads;
            options.max_brute_bits = max_brute_bits;
            if (max_brute_bits > 24) {
                err << "warning: brute-force limit raised to 2^" << max_brute_bits << " bit vectors\n";
            }
            DecompositionAtlas atlas;
            if (mode == "brute") {
                atlas = enumerate_brute(net, box, options);
            } else {
                Eigen::VectorXd seed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.input_dim()));
                if (!seed_text.empty()) {
                    seed = parse_vector(seed_text, "--seed-point");
                } else if (box) {
                    seed = 0.5 * (box->lower + box->upper);
                }
                atlas = enumerate_traverse(net, seed, box, options);
            }
            dual_graph(atlas);
            Sink regions_sink(prefix + ".regions.jsonl", out);
            Sink edges_sink(prefix + ".edges.txt", out);
            write_atlas(atlas, regions_sink.get(), edges_sink.get());
            regions_sink.close();
            edges_sink.close();
            err << atlas.size() << " regions, " << atlas.edges().size() << " edges\n";
        } else if (*region) {
            const NetworkSpec net = load_network_file(net_path);
            const Region r = region_of(net, parse_vector(point_text, "--point"), cfg.tol);
            nlohmann::json doc;
            doc["bits"] = r.bits.to_string();
            doc["active_bits"] = r.active_bits;
            doc["essential"] = {{"rows", matrix_json(r.essential.a)}, {"rhs", vector_json(r.essential.c)}};
            doc["affine"] = {{"matrix", matrix_json(r.affine.matrix)}, {"offset", vector_json(r.affine.offset)}};
            doc["interior_point"] = vector_json(r.interior_point);
            doc["inradius"] = std::isfinite(r.inradius) ? nlohmann::json(r.inradius) : nlohmann::json();
            doc["on_boundary"] = r.on_boundary_point;
            Sink sink(out_path, out);
            sink.get() << doc.dump() << '\n';
            sink.close();
        } else if (*distmat) {
            DistanceMatrix d;
            if (!bits_path.empty()) {
                auto in = open_input(bits_path);
                d = hamming_matrix(read_bit_lines(in), dedup);
            } else if (!points_path.empty() && euclidean) {
                d = euclidean_matrix(read_points_file(points_path));
            } else {
                throw Error(ErrorKind::usage, "distmat needs --bits, or --points with --euclidean");
            }
            Sink sink(out_path, out);
            export_lower_distance(d, sink.get());
            sink.close();
            if (!labels_path.empty()) {
                Sink labels(labels_path, out);
                for (const auto& l : d.labels()) labels.get() << l << '\n';
                labels.close();
            }
        } else if (*combine_cmd) {
            const DistanceMatrix d = combine(read_ldm_file(a_path), read_ldm_file(b_path),
                                             op == "min" ? CombineOp::min : CombineOp::max);
            Sink sink(out_path, out);
            export_lower_distance(d, sink.get());
            sink.close();
        } else if (*persist) {
            const DistanceMatrix d = read_ldm_file(matrix_path);
            Barcode barcode = compute_barcodes(build_filtration(d, max_dim, t_max, kDefaultSimplexCap, cfg.threads));
            if (!include_zero) barcode = barcode.without_zero_length();
            Sink sink(out_path, out);
            write_barcode_json(barcode, sink.get());
            sink.close();
            if (!text_path.empty()) {
                Sink text(text_path, out);
                write_barcode_table(barcode, text.get());
                text.close();
            }
        } else if (*export_ldm) {
            auto in = open_input(matrix_path);
            const DistanceMatrix d = read_square_matrix(in);
            Sink sink(out_path, out);
            export_lower_distance(d, sink.get());
            sink.close();
        } else if (*circle) {
            AnchorFamily family{read_points_file(anchors_path), alpha, offset_index};
            Sink sink(out_path, out);
            write_points(circle_samples(family, count, theta0, theta1), sink.get());
            sink.close();
        } else if (*torus) {
            AnchorFamily family{read_points_file(anchors_path), alpha, offset_index};
            if (!offset_index && family.anchors.size() == 5) family.offset_index = 4;
            Sink sink(out_path, out);
            write_points(uniform_count > 0 ? torus_samples_uniform(family, uniform_count, cfg.seed)
                                           : torus_samples(family, n1, n2),
                         sink.get());
            sink.close();
        } else if (*anchors) {
            Sink sink(out_path, out);
            write_points(random_orthogonal_anchors(dim, count, cfg.seed), sink.get());
            sink.close();
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}

}  // namespace relutope
