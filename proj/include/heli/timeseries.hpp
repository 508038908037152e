#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "heli/controller.hpp"
#include "heli/errors.hpp"
#include "heli/plant.hpp"
#include "heli/reference.hpp"

namespace heli {

// One sample of the closed loop taken at t, before the step starting at t
// is applied — so the recorded u is the value held over [t, t+dt).
// elev_net holds a flattened network snapshot [weights, centers, widths]
// when the run was asked to record them, and is empty otherwise.
struct TimeRecord {
    double t = 0.0;
    PlantState state;
    RefPoint elev_ref;
    RefPoint pitch_ref;
    ChannelSample elev;
    ChannelSample pitch;
    std::vector<double> elev_net;
};

struct TimeSeries {
    double dt = 0.0;
    // Shape of the recorded elevation-network snapshots (zero when the run
    // was not asked to record them).
    std::size_t net_neurons = 0;
    std::size_t net_inputs = 0;
    std::vector<TimeRecord> rows;

    void validate() const {
        if (!(dt > 0.0)) {
            throw std::domain_error("TimeSeries: dt must be > 0");
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!std::isfinite(rows[k].t)) {
                throw std::domain_error("TimeSeries: non-finite timestamp");
            }
            if (k > 0) {
                const double gap = rows[k].t - rows[k - 1].t;
                if (!(gap > 0.0) || std::abs(gap - dt) > 1e-9 * std::max(1.0, rows[k].t)) {
                    throw std::domain_error("TimeSeries: timestamps must advance by dt");
                }
            }
        }
    }
};

// Base column contract, stable across configurations. The elevation channel
// is the primary tracking task, so it owns the base columns.
inline constexpr std::array<std::string_view, 17> kBaseColumns{
    "t",  "x1", "x2", "x3",  "x4",  "x1r", "dx1r", "e1", "e2",
    "z1", "z2", "xi1", "xi2", "u1", "E",   "nn_out", "V"};

struct CsvOptions {
    // Adds the command-filter/intermediate diagnostics, the full pitch
    // channel block, and (when recorded) the flattened elevation network.
    bool diagnostics = false;
};

namespace detail {

inline void append_double(std::string& out, double v) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
}

}  // namespace detail

inline std::string csv_header(const TimeSeries& ts, const CsvOptions& opt) {
    std::string h;
    for (std::size_t i = 0; i < kBaseColumns.size(); ++i) {
        if (i) h += ',';
        h += kBaseColumns[i];
    }
    if (opt.diagnostics) {
        h += ",am1,x1c,x2c,z2f,dz2c";
        h += ",x3r,dx3r,e1p,e2p,z1p,z2p,xi1p,xi2p,u2,Ep,nn_outp,Vp";
        h += ",am2,x3c,x4c,z2fp,dz2cp";
        if (ts.net_neurons > 0 && ts.net_inputs > 0) {
            // snapshot layout: [M weights][M*N centers][M widths]
            const std::size_t m = ts.net_neurons;
            const std::size_t n = ts.net_inputs;
            for (std::size_t i = 0; i < m; ++i) h += ",w" + std::to_string(i + 1);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    h += ",c" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
                }
            }
            for (std::size_t i = 0; i < m; ++i) h += ",d" + std::to_string(i + 1);
        }
    }
    return h;
}

inline void export_csv(const TimeSeries& ts, std::ostream& os, const CsvOptions& opt = {}) {
    std::string line = csv_header(ts, opt);
    line += '\n';
    os << line;
    for (const TimeRecord& r : ts.rows) {
        line.clear();
        const double base[] = {r.t,
                               r.state.elevation,
                               r.state.elevation_rate,
                               r.state.pitch,
                               r.state.pitch_rate,
                               r.elev_ref.pos,
                               r.elev_ref.vel,
                               r.elev.e1,
                               r.elev.e2,
                               r.elev.z1,
                               r.elev.z2,
                               r.elev.xi1,
                               r.elev.xi2,
                               r.elev.u,
                               r.elev.residual,
                               r.elev.nn_out,
                               r.elev.lyapunov};
        bool first = true;
        for (double v : base) {
            if (!first) line += ',';
            first = false;
            detail::append_double(line, v);
        }
        if (opt.diagnostics) {
            const double extra[] = {r.elev.alpha_m,  r.elev.cmd_signal, r.elev.cmd_deriv,
                                    r.elev.rate_signal, r.elev.rate_deriv_est,
                                    r.pitch_ref.pos, r.pitch_ref.vel,
                                    r.pitch.e1,      r.pitch.e2,
                                    r.pitch.z1,      r.pitch.z2,
                                    r.pitch.xi1,     r.pitch.xi2,
                                    r.pitch.u,       r.pitch.residual,
                                    r.pitch.nn_out,  r.pitch.lyapunov,
                                    r.pitch.alpha_m, r.pitch.cmd_signal, r.pitch.cmd_deriv,
                                    r.pitch.rate_signal, r.pitch.rate_deriv_est};
            for (double v : extra) {
                line += ',';
                detail::append_double(line, v);
            }
            if (ts.net_neurons > 0 && ts.net_inputs > 0) {
                const std::size_t expected = ts.net_neurons * (2 + ts.net_inputs);
                if (r.elev_net.size() != expected) {
                    throw io_error("export_csv: network snapshot size mismatch");
                }
                for (double v : r.elev_net) {
                    line += ',';
                    detail::append_double(line, v);
                }
            }
        }
        line += '\n';
        os << line;
    }
    if (!os) {
        throw io_error("export_csv: stream write failed");
    }
}

inline void export_csv(const TimeSeries& ts, const std::filesystem::path& path,
                       const CsvOptions& opt = {}) {
    std::ofstream f(path);
    if (!f) {
        throw io_error("export_csv: cannot open " + path.string() + " for writing");
    }
    export_csv(ts, f, opt);
    f.close();
    if (!f) {
        throw io_error("export_csv: write to " + path.string() + " failed");
    }
}

// Column-oriented load of an exported series (or any numeric CSV with a
// header row). Values round-trip bit-exactly against append_double.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t row_count() const { return columns.empty() ? 0 : columns.front().size(); }

    const std::vector<double>& column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return columns[i];
            }
        }
        throw io_error("CsvTable: no column named '" + std::string(name) + "'");
    }
};

inline CsvTable parse_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> cells;
        std::string_view rest = line;
        while (true) {
            const std::size_t comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest = rest.substr(comma + 1);
        }
        if (line_no == 1) {
            for (std::string_view c : cells) {
                table.header.emplace_back(c);
            }
            table.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw io_error("parse_csv: line " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(table.header.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            const std::string_view cell = cells[i];
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                throw io_error("parse_csv: line " + std::to_string(line_no) + ", column " +
                               std::to_string(i + 1) + ": bad number '" + std::string(cell) +
                               "'");
            }
            table.columns[i].push_back(v);
        }
    }
    if (table.header.empty()) {
        throw io_error("parse_csv: missing header row");
    }
    return table;
}

inline CsvTable parse_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) {
        throw io_error("parse_csv: cannot open " + path.string());
    }
    return parse_csv(f);
}

}  // namespace heli
