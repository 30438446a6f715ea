#pragma once

// File output and interchange formats: 17-significant-digit decimal
// formatting (bit-exact round trip), trajectory/measure/plan CSV, and JSON
// manifests.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "swarmlab/dynamics.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/transport.hpp"

namespace swarmlab {

using json = nlohmann::json;

// Shortest decimal that round-trips would be nicer, but the interchange
// contract pins 17 significant digits.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double parse_double(const std::string& s) {
    double value = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw config_error("could not parse number: '" + s + "'");
    return value;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path.string());
    out << content;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Measure CSV: header "x0,..,v0,..,weight", one atom per row.
inline std::string measure_to_csv(const DiscreteMeasure& mu) {
    const std::size_t d = mu.dim / 2;
    std::string out;
    for (std::size_t k = 0; k < d; ++k) out += "x" + std::to_string(k) + ",";
    for (std::size_t k = 0; k < d; ++k) out += "v" + std::to_string(k) + ",";
    out += "weight\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t k = 0; k < mu.dim; ++k) {
            out += fmt17(mu.point(i)[k]);
            out += ',';
        }
        out += fmt17(mu.weights[i]);
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline DiscreteMeasure measure_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw config_error("measure csv: empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header.back() != "weight")
        throw config_error("measure csv: expected header x0,..,v0,..,weight");
    DiscreteMeasure mu;
    mu.dim = header.size() - 1;
    if (mu.dim % 2 != 0)
        throw config_error("measure csv: coordinate count must be even (positions then velocities)");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw config_error("measure csv: row has wrong number of columns");
        for (std::size_t k = 0; k < mu.dim; ++k) mu.points.push_back(parse_double(cells[k]));
        mu.weights.push_back(parse_double(cells.back()));
    }
    mu.validate();
    return mu;
}

// Trajectory CSV: one row per particle per snapshot.
template <std::size_t D>
inline std::string trajectory_to_csv(const Trajectory<D>& traj) {
    std::string out = "t,id";
    for (std::size_t k = 0; k < D; ++k) out += ",x" + std::to_string(k);
    for (std::size_t k = 0; k < D; ++k) out += ",v" + std::to_string(k);
    out += ",m\n";
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const auto& st = traj.snapshots[s];
        const std::string t = fmt17(traj.snapshot_times[s]);
        for (std::size_t i = 0; i < st.size(); ++i) {
            out += t;
            out += ',';
            out += std::to_string(i);
            for (std::size_t k = 0; k < D; ++k) {
                out += ',';
                out += fmt17(st.positions[i][k]);
            }
            for (std::size_t k = 0; k < D; ++k) {
                out += ',';
                out += fmt17(st.velocities[i][k]);
            }
            out += ',';
            out += fmt17(st.weights[i]);
            out += '\n';
        }
    }
    return out;
}

inline std::string plan_to_csv(const TransportPlan& plan) {
    std::string out = "i,j,mass\n";
    for (const auto& e : plan.entries) {
        out += std::to_string(e.from);
        out += ',';
        out += std::to_string(e.to);
        out += ',';
        out += fmt17(e.mass);
        out += '\n';
    }
    return out;
}

} // namespace swarmlab
