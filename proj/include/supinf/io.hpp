#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grid.hpp"

namespace supinf {

// Shortest decimal representation that round-trips the double exactly.
inline std::string fmt_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string function_csv(const DiscreteFunction& u) {
    std::ostringstream os;
    os << (u.grid.n == 1 ? "x,u\n" : "x,y,u\n");
    for (int idx = 0; idx < u.grid.total_nodes(); ++idx) {
        Vec pos = u.grid.position(idx);
        os << fmt_double(pos[0]);
        if (u.grid.n == 2) os << ',' << fmt_double(pos[1]);
        os << ',' << fmt_double(u.values[static_cast<std::size_t>(idx)]) << '\n';
    }
    return os.str();
}

inline nlohmann::json boundary_json(const BoundaryData& bd) {
    nlohmann::json j;
    j["trace"] = {{"xmin", bd.trace_xmin}, {"xmax", bd.trace_xmax}};
    j["normal_slope"] = {{"xmin", bd.slope_xmin}, {"xmax", bd.slope_xmax}};
    if (!bd.trace_ymin.empty()) {
        j["trace"]["ymin"] = bd.trace_ymin;
        j["trace"]["ymax"] = bd.trace_ymax;
        j["normal_slope"]["ymin"] = bd.slope_ymin;
        j["normal_slope"]["ymax"] = bd.slope_ymax;
    }
    return j;
}

inline BoundaryData boundary_from_json(const nlohmann::json& j) {
    BoundaryData bd;
    bd.trace_xmin = j.at("trace").at("xmin").get<std::vector<double>>();
    bd.trace_xmax = j.at("trace").at("xmax").get<std::vector<double>>();
    bd.slope_xmin = j.at("normal_slope").at("xmin").get<std::vector<double>>();
    bd.slope_xmax = j.at("normal_slope").at("xmax").get<std::vector<double>>();
    if (j.at("trace").contains("ymin")) {
        bd.trace_ymin = j.at("trace").at("ymin").get<std::vector<double>>();
        bd.trace_ymax = j.at("trace").at("ymax").get<std::vector<double>>();
        bd.slope_ymin = j.at("normal_slope").at("ymin").get<std::vector<double>>();
        bd.slope_ymax = j.at("normal_slope").at("ymax").get<std::vector<double>>();
    }
    return bd;
}

inline void write_function(const DiscreteFunction& u, const std::string& csv_path) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    f << function_csv(u);
    std::ofstream side(csv_path + ".boundary.json");
    side << boundary_json(u.boundary).dump(2) << '\n';
}

// Reads a node CSV plus its boundary sidecar; the grid is reconstructed from
// the coordinate columns (uniform spacing assumed).
inline DiscreteFunction read_function(const std::string& csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv " + csv_path);
    bool two_d = line.find("y") != std::string::npos;
    std::vector<double> xs, ys, us;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        xs.push_back(row.at(0));
        if (two_d) ys.push_back(row.at(1));
        us.push_back(row.back());
    }
    std::ifstream side(csv_path + ".boundary.json");
    if (!side) throw std::runtime_error("missing sidecar " + csv_path + ".boundary.json");
    BoundaryData bd = boundary_from_json(nlohmann::json::parse(side));

    if (!two_d) {
        int m = static_cast<int>(xs.size());
        Grid g = Grid::interval(xs.front(), xs.back(), m);
        return DiscreteFunction(g, std::move(us), std::move(bd));
    }
    int mx = 1;
    while (mx < static_cast<int>(xs.size()) && ys[static_cast<std::size_t>(mx)] == ys[0]) ++mx;
    int my = static_cast<int>(xs.size()) / mx;
    Grid g = Grid::rectangle(xs.front(), xs[static_cast<std::size_t>(mx - 1)], mx, ys.front(), ys.back(), my);
    return DiscreteFunction(g, std::move(us), std::move(bd));
}

}  // namespace supinf
