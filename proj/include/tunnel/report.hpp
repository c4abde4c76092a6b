#pragma once

// Labeled result grids (the k_max grid over L/a and w a, phase-time sweeps, transmission
// curves) and their CSV / JSON serialization.
//
// All tables work in units where the packet width a = 1 and hbar = 1, so the
// axes are the dimensionless groups w a, k0 a and L / a.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tunnel/barrier.hpp"
#include "tunnel/errors.hpp"
#include "tunnel/packet.hpp"
#include "tunnel/spectral.hpp"

namespace tunnel {

inline constexpr std::string_view kVersion = "1.0.0";

struct TableAxis {
    std::string name;
    std::vector<double> values;
    /// Optional per-entry labels (used for quantity columns); empty means "name=value".
    std::vector<std::string> labels;

    std::size_t size() const { return values.size(); }
    std::string label(std::size_t i) const;
};

struct TableCell {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<Regime> flag;
};

struct SweepTable {
    std::string title;
    TableAxis rows;
    TableAxis cols;
    std::vector<TableCell> cells;  ///< row-major, rows.size() x cols.size()
    std::vector<std::pair<std::string, std::string>> metadata;

    TableCell& at(std::size_t r, std::size_t c) { return cells.at(r * cols.size() + c); }
    const TableCell& at(std::size_t r, std::size_t c) const { return cells.at(r * cols.size() + c); }

    void validate() const {
        if (cells.size() != rows.size() * cols.size()) {
            throw DomainError("SweepTable: cell count does not match axes");
        }
        if (!cols.labels.empty() && cols.labels.size() != cols.size()) {
            throw DomainError("SweepTable: column labels do not match column values");
        }
    }
};

namespace detail {

inline bool same_number(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace detail

inline bool operator==(const TableAxis& a, const TableAxis& b) {
    if (a.name != b.name || a.labels != b.labels || a.values.size() != b.values.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!detail::same_number(a.values[i], b.values[i])) {
            return false;
        }
    }
    return true;
}

inline bool operator==(const SweepTable& a, const SweepTable& b) {
    if (a.title != b.title || !(a.rows == b.rows) || !(a.cols == b.cols) || a.metadata != b.metadata ||
        a.cells.size() != b.cells.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        if (!detail::same_number(a.cells[i].value, b.cells[i].value) || a.cells[i].flag != b.cells[i].flag) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Number formatting: shortest round-trip decimal; infinities as "inf".

inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    if (s == "inf" || s == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw DomainError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline std::string TableAxis::label(std::size_t i) const {
    if (!labels.empty()) {
        return labels.at(i);
    }
    return name + "=" + format_number(values.at(i));
}

// ---------------------------------------------------------------------------
// Table generation

/// The w a columns of the published k_max table.
inline std::vector<double> table1_wa() {
    return {1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0};
}

/// The L / a rows of the published k_max table: 0.00, 0.05, ..., 1.00.
inline std::vector<double> table1_La() {
    std::vector<double> v;
    for (int i = 0; i <= 20; ++i) {
        v.push_back(i / 20.0);
    }
    return v;
}

/// k_max a for every (L/a, w a) pair at fixed k0 a; cells carry the regime.
inline SweepTable generate_table1(std::span<const double> wa_list, std::span<const double> La_list,
                                  double k0a = 1.0, const KmaxConfig& cfg = {}) {
    for (double wa : wa_list) {
        if (!(wa > k0a)) {
            throw DomainError("generate_table1: column w a = " + format_number(wa) + " must exceed k0 a = " +
                              format_number(k0a));
        }
    }
    SweepTable table;
    table.title = "kmax";
    table.rows = {"La", {La_list.begin(), La_list.end()}, {}};
    table.cols = {"wa", {wa_list.begin(), wa_list.end()}, {}};
    table.metadata = {{"quantity", "kmax*a"},
                      {"k0a", format_number(k0a)},
                      {"m", "1"},
                      {"units", "a=1, hbar=1"},
                      {"spectrum", "gaussian, full-line normalization"},
                      {"kmax_grid_points", std::to_string(cfg.grid_points)},
                      {"kmax_rel_tol", format_number(cfg.rel_tol)},
                      {"version", std::string(kVersion)}};
    table.cells.resize(La_list.size() * wa_list.size());
    const PacketSpec packet{k0a, 1.0, std::nullopt};
    for (std::size_t r = 0; r < La_list.size(); ++r) {
        for (std::size_t c = 0; c < wa_list.size(); ++c) {
            const BarrierSpec barrier{wa_list[c], La_list[r], 1.0};
            const auto res = find_kmax(packet, barrier, cfg);
            table.at(r, c) = {res.k_max, res.regime};
        }
    }
    return table;
}

enum class SweepMode { VsL, VsW };
enum class KmaxPolicy { Solved, NaiveK0 };

/// Parameters held fixed during a phase-time sweep (units a = 1).
struct SweepFixed {
    double wa = 4.0;   ///< used by VsL
    double La = 1.0;   ///< used by VsW
    double k0a = 1.0;
    double m = 1.0;
};

/// Phase time along L (at fixed w) or along w (at fixed L), evaluated at the
/// solved k_max or at the naive k0. Columns: the wavenumber used, the exact
/// phase time t_T and the opaque-limit time 2m/(k kappa) (inf once kappa -> 0).
inline SweepTable sweep_phase_time(SweepMode mode, const SweepFixed& fixed, std::span<const double> grid,
                                   KmaxPolicy policy, const KmaxConfig& cfg = {}) {
    if (grid.empty()) {
        throw DomainError("sweep_phase_time: empty grid");
    }
    const PacketSpec packet{fixed.k0a, 1.0, std::nullopt};
    packet.validate();
    SweepTable table;
    table.title = "phase_time";
    table.rows = {mode == SweepMode::VsL ? "La" : "wa", {grid.begin(), grid.end()}, {}};
    table.cols = {"quantity", {0.0, 1.0, 2.0}, {"ka", "tT", "toL"}};
    table.metadata = {{"mode", mode == SweepMode::VsL ? "vs_L" : "vs_w"},
                      {"policy", policy == KmaxPolicy::Solved ? "solved" : "naive_k0"},
                      {mode == SweepMode::VsL ? "wa" : "La", format_number(mode == SweepMode::VsL ? fixed.wa
                                                                                              : fixed.La)},
                      {"k0a", format_number(fixed.k0a)},
                      {"m", format_number(fixed.m)},
                      {"units", "a=1, hbar=1"},
                      {"version", std::string(kVersion)}};
    table.cells.resize(grid.size() * 3);
    for (std::size_t r = 0; r < grid.size(); ++r) {
        BarrierSpec b{mode == SweepMode::VsL ? fixed.wa : grid[r], mode == SweepMode::VsL ? grid[r] : fixed.La,
                      fixed.m};
        b.validate();
        if (!(b.w > fixed.k0a)) {
            throw DomainError("sweep_phase_time: w a = " + format_number(b.w) + " must exceed k0 a");
        }
        std::optional<Regime> flag;
        double k = fixed.k0a;
        if (policy == KmaxPolicy::Solved) {
            const auto res = find_kmax(packet, b, cfg);
            k = res.k_max;
            flag = res.regime;
        }
        table.at(r, 0) = {k, flag};
        table.at(r, 1) = {phase_time(k, b), flag};
        table.at(r, 2) = {opaque_limit_time(k, b), flag};
    }
    return table;
}

/// T, Theta, dTheta/dk and t_T on k_i = w i / n, i = 1..n (units a = 1).
inline SweepTable transmission_table(const BarrierSpec& b, int k_points) {
    b.validate();
    if (k_points < 1) {
        throw DomainError("transmission_table: need at least one k point");
    }
    SweepTable table;
    table.title = "transmission";
    table.rows.name = "ka";
    for (int i = 1; i <= k_points; ++i) {
        table.rows.values.push_back(i == k_points ? b.w : b.w * i / k_points);
    }
    table.cols = {"quantity", {0.0, 1.0, 2.0, 3.0}, {"T", "Theta", "dTheta_dk", "tT"}};
    table.metadata = {{"wa", format_number(b.w)},
                      {"La", format_number(b.L)},
                      {"m", format_number(b.m)},
                      {"units", "a=1, hbar=1"},
                      {"version", std::string(kVersion)}};
    for (double k : table.rows.values) {
        table.cells.push_back({transmission_modulus(k, b), std::nullopt});
        table.cells.push_back({transmission_phase(k, b), std::nullopt});
        table.cells.push_back({phase_derivative(k, b), std::nullopt});
        table.cells.push_back({phase_time(k, b), std::nullopt});
    }
    return table;
}

// ---------------------------------------------------------------------------
// Serialization

enum class Format { Csv, Json };

namespace detail {

inline std::string_view flag_symbol(const std::optional<Regime>& flag) {
    if (!flag) {
        return "";
    }
    switch (*flag) {
        case Regime::FullyDistorted:
            return "*";
        case Regime::BoundaryLocalMax:
            return "+";
        case Regime::Undistorted:
            return ".";
    }
    return "";
}

inline std::optional<Regime> flag_from_symbol(std::string_view s) {
    if (s == "*") {
        return Regime::FullyDistorted;
    }
    if (s == "+") {
        return Regime::BoundaryLocalMax;
    }
    if (s == ".") {
        return Regime::Undistorted;
    }
    if (s.empty()) {
        return std::nullopt;
    }
    throw DomainError("unknown flag symbol '" + std::string(s) + "'");
}

inline nlohmann::ordered_json number_to_json(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

inline double number_from_json(const nlohmann::ordered_json& j) {
    if (j.is_string()) {
        return parse_number(j.get<std::string>());
    }
    return j.get<double>();
}

inline std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ";" : "") + format_number(v[i]);
    }
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline std::string_view to_string(FieldKind k) {
    return k == FieldKind::Transmitted ? "transmitted" : "incident";
}

}  // namespace detail

/// Writes the table. CSV: "# key: value" comment lines (axes, then metadata),
/// a header row, then one row per row-axis value with a flag column after
/// every value column ("*" fully distorted, "+" boundary local max,
/// "." undistorted, empty for none). JSON: axes, cells, flags and metadata.
inline void emit(const SweepTable& table, Format format, std::ostream& out) {
    table.validate();
    if (format == Format::Json) {
        nlohmann::ordered_json j;
        j["title"] = table.title;
        auto axis_json = [](const TableAxis& a) {
            nlohmann::ordered_json ax;
            ax["name"] = a.name;
            ax["values"] = nlohmann::ordered_json::array();
            for (double v : a.values) {
                ax["values"].push_back(detail::number_to_json(v));
            }
            if (!a.labels.empty()) {
                ax["labels"] = a.labels;
            }
            return ax;
        };
        j["row_axis"] = axis_json(table.rows);
        j["col_axis"] = axis_json(table.cols);
        j["cells"] = nlohmann::ordered_json::array();
        j["flags"] = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            auto row = nlohmann::ordered_json::array();
            auto flags = nlohmann::ordered_json::array();
            for (std::size_t c = 0; c < table.cols.size(); ++c) {
                const auto& cell = table.at(r, c);
                row.push_back(detail::number_to_json(cell.value));
                if (cell.flag) {
                    flags.push_back(std::string(to_string(*cell.flag)));
                } else {
                    flags.push_back(nullptr);
                }
            }
            j["cells"].push_back(std::move(row));
            j["flags"].push_back(std::move(flags));
        }
        j["metadata"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : table.metadata) {
            j["metadata"][k] = v;
        }
        out << j.dump(2) << '\n';
        return;
    }

    out << "# title: " << table.title << '\n';
    out << "# row_axis: " << table.rows.name << '\n';
    out << "# col_axis: " << table.cols.name << '\n';
    out << "# col_values: " << detail::join_numbers(table.cols.values) << '\n';
    if (!table.cols.labels.empty()) {
        std::string labels;
        for (std::size_t i = 0; i < table.cols.labels.size(); ++i) {
            labels += (i ? ";" : "") + table.cols.labels[i];
        }
        out << "# col_labels: " << labels << '\n';
    }
    for (const auto& [k, v] : table.metadata) {
        out << "# " << k << ": " << v << '\n';
    }
    out << table.rows.name;
    for (std::size_t c = 0; c < table.cols.size(); ++c) {
        out << ',' << table.cols.label(c) << ",flag";
    }
    out << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << format_number(table.rows.values[r]);
        for (std::size_t c = 0; c < table.cols.size(); ++c) {
            const auto& cell = table.at(r, c);
            out << ',' << format_number(cell.value) << ',' << detail::flag_symbol(cell.flag);
        }
        out << '\n';
    }
}

/// Writes a sampled field: coordinate, Re, Im and |psi|^2 per sample.
inline void emit(const ComplexField& field, Format format, std::ostream& out) {
    const char* coord = field.axis == FieldAxis::Space ? "x" : "t";
    const char* fixed = field.axis == FieldAxis::Space ? "t" : "x";
    std::vector<std::pair<std::string, std::string>> params = {
        {"kind", std::string(detail::to_string(field.kind))},
        {fixed, format_number(field.fixed)},
        {"k0", format_number(field.packet.k0)},
        {"a", format_number(field.packet.a)},
        {"k_cut", field.packet.k_cut ? format_number(*field.packet.k_cut) : "none"},
        {"w", format_number(field.barrier.w)},
        {"L", format_number(field.barrier.L)},
        {"m", format_number(field.mass)},
        {"band_lo", format_number(field.band.lo)},
        {"band_hi", format_number(field.band.hi)},
        {"version", std::string(kVersion)}};
    if (format == Format::Json) {
        nlohmann::ordered_json j;
        j["axis"] = coord;
        j["params"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : params) {
            j["params"][k] = v;
        }
        auto& s = j["samples"];
        s[coord] = nlohmann::ordered_json::array();
        s["re"] = nlohmann::ordered_json::array();
        s["im"] = nlohmann::ordered_json::array();
        s["abs2"] = nlohmann::ordered_json::array();
        for (const auto& sample : field.samples) {
            s[coord].push_back(detail::number_to_json(sample.coordinate));
            s["re"].push_back(detail::number_to_json(sample.amplitude.real()));
            s["im"].push_back(detail::number_to_json(sample.amplitude.imag()));
            s["abs2"].push_back(detail::number_to_json(std::norm(sample.amplitude)));
        }
        out << j.dump(2) << '\n';
        return;
    }
    for (const auto& [k, v] : params) {
        out << "# " << k << ": " << v << '\n';
    }
    out << coord << ",re,im,abs2\n";
    for (const auto& sample : field.samples) {
        out << format_number(sample.coordinate) << ',' << format_number(sample.amplitude.real()) << ','
            << format_number(sample.amplitude.imag()) << ',' << format_number(std::norm(sample.amplitude))
            << '\n';
    }
}

/// emit() into a file, replacing it.
template <class Emittable>
void emit_to_file(const Emittable& what, Format format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    emit(what, format, out);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

inline SweepTable parse_table_json(std::string_view text) {
    const auto j = nlohmann::ordered_json::parse(text);
    SweepTable t;
    t.title = j.at("title").get<std::string>();
    auto read_axis = [](const nlohmann::ordered_json& ax) {
        TableAxis a;
        a.name = ax.at("name").get<std::string>();
        for (const auto& v : ax.at("values")) {
            a.values.push_back(detail::number_from_json(v));
        }
        if (ax.contains("labels")) {
            a.labels = ax.at("labels").get<std::vector<std::string>>();
        }
        return a;
    };
    t.rows = read_axis(j.at("row_axis"));
    t.cols = read_axis(j.at("col_axis"));
    const auto& cells = j.at("cells");
    const auto& flags = j.at("flags");
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            TableCell cell{detail::number_from_json(cells[r][c]), std::nullopt};
            const auto& f = flags.at(r).at(c);
            if (!f.is_null()) {
                cell.flag = regime_from_string(f.get<std::string>());
                if (!cell.flag) {
                    throw DomainError("unknown regime '" + f.get<std::string>() + "'");
                }
            }
            t.cells.push_back(cell);
        }
    }
    for (const auto& [k, v] : j.at("metadata").items()) {
        t.metadata.emplace_back(k, v.get<std::string>());
    }
    t.validate();
    return t;
}

inline SweepTable parse_table_csv(std::string_view text) {
    SweepTable t;
    std::vector<std::string> col_labels;
    bool header_seen = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) {
                throw DomainError("malformed comment line: " + line);
            }
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "title") {
                t.title = value;
            } else if (key == "row_axis") {
                t.rows.name = value;
            } else if (key == "col_axis") {
                t.cols.name = value;
            } else if (key == "col_values") {
                for (const auto& s : detail::split(value, ';')) {
                    t.cols.values.push_back(parse_number(s));
                }
            } else if (key == "col_labels") {
                t.cols.labels = detail::split(value, ';');
            } else {
                t.metadata.emplace_back(key, value);
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (fields.size() != 1 + 2 * t.cols.size()) {
            throw DomainError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(1 + 2 * t.cols.size()));
        }
        t.rows.values.push_back(parse_number(fields[0]));
        for (std::size_t c = 0; c < t.cols.size(); ++c) {
            t.cells.push_back({parse_number(fields[1 + 2 * c]), detail::flag_from_symbol(fields[2 + 2 * c])});
        }
    }
    t.validate();
    return t;
}

}  // namespace tunnel
