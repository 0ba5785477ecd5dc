#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp> // vendored nlohmann/json

#include "gdas/datasets.hpp"
#include "gdas/gershgorin.hpp"
#include "gdas/graph.hpp"
#include "gdas/spectral.hpp"

namespace gdas {

namespace io_detail {

// Shortest decimal that round-trips a double exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double(const std::string& s, const std::filesystem::path& path,
                           std::size_t line_no, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw io_error(path.string() + ":" + std::to_string(line_no) + ": bad " + what +
                       " value '" + s + "'");
    return v;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace io_detail

// All writes are temp-then-rename so a crash never leaves a torn file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ---- node / edge CSV -------------------------------------------------------
// nodes: header `id,loc_x,loc_y,value`; edges: header `src,dst,weight`.
// UTF-8, LF, decimal dot; external ids must not contain commas.

inline constexpr std::string_view kNodesHeader = "id,loc_x,loc_y,value";
inline constexpr std::string_view kEdgesHeader = "src,dst,weight";
inline constexpr std::string_view kSamplesHeader = "node_id,scale_factor,sampled";

inline std::vector<NodeRecord> load_nodes_csv(const std::filesystem::path& path) {
    const auto lines = io_detail::read_lines(path);
    if (lines.empty() || io_detail::split_csv(lines[0]) != io_detail::split_csv(std::string(kNodesHeader)))
        throw io_error(path.string() + ":1: expected header '" + std::string(kNodesHeader) + "'");
    std::vector<NodeRecord> nodes;
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io_detail::split_csv(lines[i]);
        if (f.size() != 4)
            throw io_error(path.string() + ":" + std::to_string(i + 1) +
                           ": expected 4 fields, got " + std::to_string(f.size()));
        if (f[0].empty())
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": empty node id");
        if (const auto [it, inserted] = seen.emplace(f[0], i + 1); !inserted)
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": duplicate node id '" +
                           f[0] + "' (first seen at line " + std::to_string(it->second) + ")");
        NodeRecord rec;
        rec.id = f[0];
        rec.loc_x = io_detail::parse_double(f[1], path, i + 1, "loc_x");
        rec.loc_y = io_detail::parse_double(f[2], path, i + 1, "loc_y");
        rec.value = io_detail::parse_double(f[3], path, i + 1, "value");
        if (!std::isfinite(rec.loc_x) || !std::isfinite(rec.loc_y) || !std::isfinite(rec.value))
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": non-finite field");
        nodes.push_back(std::move(rec));
    }
    return nodes;
}

inline std::map<std::string, NodeId> node_index(std::span<const NodeRecord> nodes) {
    std::map<std::string, NodeId> index;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        index.emplace(nodes[i].id, static_cast<NodeId>(i));
    return index;
}

// Edges by external id; (i, j) and (j, i) are the same edge. Identical
// duplicates collapse, conflicting duplicate weights are an error.
inline Graph load_edges_csv(const std::filesystem::path& path,
                            std::span<const NodeRecord> nodes) {
    const auto lines = io_detail::read_lines(path);
    if (lines.empty() || io_detail::split_csv(lines[0]) != io_detail::split_csv(std::string(kEdgesHeader)))
        throw io_error(path.string() + ":1: expected header '" + std::string(kEdgesHeader) + "'");
    const auto index = node_index(nodes);
    std::map<std::pair<NodeId, NodeId>, std::pair<double, std::size_t>> dedup;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io_detail::split_csv(lines[i]);
        if (f.size() != 3)
            throw io_error(path.string() + ":" + std::to_string(i + 1) +
                           ": expected 3 fields, got " + std::to_string(f.size()));
        const auto src = index.find(f[0]);
        const auto dst = index.find(f[1]);
        if (src == index.end())
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": unknown node id '" +
                           f[0] + "'");
        if (dst == index.end())
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": unknown node id '" +
                           f[1] + "'");
        const double w = io_detail::parse_double(f[2], path, i + 1, "weight");
        std::pair<NodeId, NodeId> key{std::min(src->second, dst->second),
                                      std::max(src->second, dst->second)};
        if (const auto it = dedup.find(key); it != dedup.end()) {
            if (it->second.first != w)
                throw io_error(path.string() + ":" + std::to_string(i + 1) +
                               ": conflicting duplicate edge (" + f[0] + ", " + f[1] +
                               "): weight " + io_detail::fmt_double(w) + " vs " +
                               io_detail::fmt_double(it->second.first) + " at line " +
                               std::to_string(it->second.second));
            continue;
        }
        dedup.emplace(key, std::make_pair(w, i + 1));
    }
    std::vector<Edge> edges;
    edges.reserve(dedup.size());
    for (const auto& [key, value] : dedup) edges.push_back({key.first, key.second, value.first});
    return Graph(static_cast<NodeId>(nodes.size()), edges);
}

inline void write_nodes_csv(const std::filesystem::path& path,
                            std::span<const NodeRecord> nodes) {
    std::string out(kNodesHeader);
    out += '\n';
    for (const NodeRecord& n : nodes) {
        out += n.id;
        out += ',';
        out += io_detail::fmt_double(n.loc_x);
        out += ',';
        out += io_detail::fmt_double(n.loc_y);
        out += ',';
        out += io_detail::fmt_double(n.value);
        out += '\n';
    }
    write_file_atomic(path, out);
}

inline void write_edges_csv(const std::filesystem::path& path, const Graph& g,
                            std::span<const NodeRecord> nodes) {
    std::string out(kEdgesHeader);
    out += '\n';
    for (const Edge& e : g.edges()) {
        out += nodes[static_cast<std::size_t>(e.src)].id;
        out += ',';
        out += nodes[static_cast<std::size_t>(e.dst)].id;
        out += ',';
        out += io_detail::fmt_double(e.weight);
        out += '\n';
    }
    write_file_atomic(path, out);
}

// ---- graph bundle ----------------------------------------------------------
// A directory holding nodes.csv + edges.csv + meta.json.

struct GraphBundle {
    std::vector<NodeRecord> nodes;
    Graph graph;
    nlohmann::json meta;

    GraphSignal signal() const {
        GraphSignal x;
        x.reserve(nodes.size());
        for (const NodeRecord& n : nodes) x.push_back(n.value);
        return x;
    }
};

inline void save_bundle(const std::filesystem::path& dir, const GraphBundle& bundle) {
    std::filesystem::create_directories(dir);
    write_nodes_csv(dir / "nodes.csv", bundle.nodes);
    write_edges_csv(dir / "edges.csv", bundle.graph, bundle.nodes);
    write_file_atomic(dir / "meta.json", bundle.meta.dump(2) + "\n");
}

inline GraphBundle load_bundle(const std::filesystem::path& dir) {
    GraphBundle bundle;
    bundle.nodes = load_nodes_csv(dir / "nodes.csv");
    bundle.graph = load_edges_csv(dir / "edges.csv", bundle.nodes);
    const auto meta_path = dir / "meta.json";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream in(meta_path);
        try {
            in >> bundle.meta;
        } catch (const nlohmann::json::exception& e) {
            throw io_error(meta_path.string() + ": bad JSON: " + e.what());
        }
    }
    return bundle;
}

// ---- sample sets -----------------------------------------------------------

inline void write_samples_csv(const std::filesystem::path& path,
                              std::span<const NodeRecord> nodes, const SamplingState& state) {
    std::string out(kSamplesHeader);
    out += '\n';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += nodes[i].id;
        out += ',';
        out += io_detail::fmt_double(state.scale[i]);
        out += state.sampled[i] ? ",1\n" : ",0\n";
    }
    write_file_atomic(path, out);
}

inline SamplingState load_samples_csv(const std::filesystem::path& path,
                                      std::span<const NodeRecord> nodes) {
    const auto lines = io_detail::read_lines(path);
    if (lines.empty() || io_detail::split_csv(lines[0]) != io_detail::split_csv(std::string(kSamplesHeader)))
        throw io_error(path.string() + ":1: expected header '" + std::string(kSamplesHeader) +
                       "'");
    const auto index = node_index(nodes);
    SamplingState state = SamplingState::unsampled(static_cast<NodeId>(nodes.size()));
    std::vector<bool> seen(nodes.size(), false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io_detail::split_csv(lines[i]);
        if (f.size() != 3)
            throw io_error(path.string() + ":" + std::to_string(i + 1) +
                           ": expected 3 fields, got " + std::to_string(f.size()));
        const auto it = index.find(f[0]);
        if (it == index.end())
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": unknown node id '" +
                           f[0] + "'");
        const std::size_t u = static_cast<std::size_t>(it->second);
        if (seen[u])
            throw io_error(path.string() + ":" + std::to_string(i + 1) + ": duplicate node id '" +
                           f[0] + "'");
        seen[u] = true;
        state.scale[u] = io_detail::parse_double(f[1], path, i + 1, "scale_factor");
        if (f[2] == "1")
            state.sampled[u] = true;
        else if (f[2] != "0")
            throw io_error(path.string() + ":" + std::to_string(i + 1) +
                           ": sampled flag must be 0 or 1, got '" + f[2] + "'");
        state.visited[u] = true;
    }
    for (std::size_t u = 0; u < nodes.size(); ++u)
        if (!seen[u])
            throw io_error(path.string() + ": missing row for node id '" + nodes[u].id + "'");
    return state;
}

// ---- sweep table -----------------------------------------------------------
// Plot-ready CSV; the full configuration rides along as `# key=value`
// comment lines so every table is self-describing.

inline void write_sweep_csv(const std::filesystem::path& path,
                            std::span<const SweepRow> rows, const SweepConfig& cfg) {
    std::string out;
    out += "# mu=" + io_detail::fmt_double(cfg.mu) + "\n";
    out += "# epsilon=" + io_detail::fmt_double(cfg.epsilon) + "\n";
    out += "# sigma=" + io_detail::fmt_double(cfg.sigma) + "\n";
    out += "# seed=" + std::to_string(cfg.seed) + "\n";
    out += "# start=" + cfg.start.describe() + "\n";
    out += "# trials=" + std::to_string(cfg.trials) + "\n";
    out += "K,T_hat,lambda_min_bfis,lambda_min_random_mean,mse_bfis,mse_random_mean,trial_count\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.budget);
        out += ',';
        out += io_detail::fmt_double(r.threshold_hat);
        out += ',';
        out += io_detail::fmt_double(r.lambda_min_bfis);
        out += ',';
        out += io_detail::fmt_double(r.lambda_min_random_mean);
        out += ',';
        out += io_detail::fmt_double(r.mse_bfis);
        out += ',';
        out += io_detail::fmt_double(r.mse_random_mean);
        out += ',';
        out += std::to_string(r.trial_count);
        out += '\n';
    }
    write_file_atomic(path, out);
}

// xhat.csv: reconstructed value per node id.
inline void write_signal_csv(const std::filesystem::path& path,
                             std::span<const NodeRecord> nodes, std::span<const double> values) {
    std::string out("id,value\n");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += nodes[i].id;
        out += ',';
        out += io_detail::fmt_double(values[i]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

} // namespace gdas
