#include "vmcs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vmcs {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> trajectory_columns(int n_sites, bool site_resolved) {
    std::vector<std::string> cols = {"t", "sx_avg", "sy_avg", "sz_avg"};
    if (site_resolved) {
        for (const char* axis : {"sx", "sy", "sz"}) {
            for (int i = 0; i < n_sites; ++i) {
                cols.push_back(std::string(axis) + "_" + std::to_string(i));
            }
        }
    }
    cols.insert(cols.end(), {"sum_c_drift", "max_m_norm", "residual"});
    return cols;
}

std::string trajectory_header_line(int n_sites, bool site_resolved) {
    std::ostringstream out;
    out << "# " << kTrajectorySchema << " sites=" << n_sites
        << " site_resolved=" << (site_resolved ? 1 : 0) << "\n";
    const auto cols = trajectory_columns(n_sites, site_resolved);
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    return out.str();
}

std::string trajectory_row(const ObservableRecord& rec, bool site_resolved) {
    std::ostringstream out;
    out << format_double(rec.t) << ',' << format_double(rec.avg.x) << ','
        << format_double(rec.avg.y) << ',' << format_double(rec.avg.z);
    if (site_resolved) {
        for (const Vec3& v : rec.site) out << ',' << format_double(v.x);
        for (const Vec3& v : rec.site) out << ',' << format_double(v.y);
        for (const Vec3& v : rec.site) out << ',' << format_double(v.z);
    }
    out << ',' << format_double(rec.sum_c_drift) << ',' << format_double(rec.max_m_norm) << ','
        << format_double(rec.residual) << '\n';
    return out.str();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, bool site_resolved) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << trajectory_header_line(traj.n_sites, site_resolved);
    for (const auto& rec : traj.records) out << trajectory_row(rec, site_resolved);
}

int TrajectoryTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

TrajectoryTable read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory file: " + path);

    TrajectoryTable table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw std::runtime_error(path + ": missing schema line");
    }
    {
        std::istringstream hdr(line.substr(2));
        hdr >> table.schema;
    }
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing column header");
    {
        std::istringstream cols(line);
        std::string col;
        while (std::getline(cols, col, ',')) table.columns.push_back(col);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.columns.size());
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size()) {
            throw std::runtime_error(path + ": ragged CSV row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string steady_state_json(const SteadyState& ss, double tail_fraction) {
    nlohmann::json j;
    j["schema"] = "vmcs-steady-state-v1";
    j["tail_fraction"] = tail_fraction;
    j["n_tail"] = ss.n_tail;
    j["t_start"] = ss.t_start;
    j["t_end"] = ss.t_end;
    j["converged"] = ss.converged;
    auto obs = [](const TailStat& s) {
        return nlohmann::json{{"mean", s.mean}, {"stddev", s.stddev}, {"drift", s.drift}};
    };
    j["observables"] = {{"sx", obs(ss.sx)}, {"sy", obs(ss.sy)}, {"sz", obs(ss.sz)}};
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace vmcs
