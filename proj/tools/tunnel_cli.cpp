// Command-line front end: transmission curves, the k_max table, packet field
// scans and phase-time sweeps, written as CSV or JSON.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tunnel/tunnel.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct OutputOptions {
    std::string format = "csv";
    std::string output = "-";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output,-o", out.output, "Output file, '-' for stdout")->capture_default_str();
    cmd->add_option("--config", "Flat key=value file mirroring these flags (flags win)")->check(CLI::ExistingFile);
}

// Fills options the command line left unset from a flat key=value file.
void apply_config(CLI::App* cmd, const std::string& path) {
    for (const auto& item : CLI::ConfigBase().from_file(path)) {
        if (!item.parents.empty()) {
            throw tunnel::DomainError("config: sections are not supported ('" + item.fullname() + "')");
        }
        auto* op = cmd->get_option_no_throw("--" + item.name);
        if (op == nullptr || item.name == "config") {
            throw tunnel::DomainError("config: unknown key '" + item.name + "' for " + cmd->get_name());
        }
        if (op->count() > 0) {
            continue;
        }
        for (const auto& v : item.inputs) {
            op->add_result(v);
        }
        op->run_callback();
    }
}

tunnel::Format to_format(const std::string& s) {
    return s == "json" ? tunnel::Format::Json : tunnel::Format::Csv;
}

template <class Emittable>
void write(const Emittable& what, const OutputOptions& out) {
    if (out.output == "-") {
        std::ostringstream buf;
        tunnel::emit(what, to_format(out.format), buf);
        std::cout << buf.str();
        std::cout.flush();
        if (!std::cout) {
            throw tunnel::IoError("write to stdout failed");
        }
        return;
    }
    tunnel::emit_to_file(what, to_format(out.format), out.output);
}

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;
};

// "lo:hi:n" (n >= 2, endpoints included) or a single value.
Grid parse_grid(const std::string& text) {
    const auto parts = tunnel::detail::split(text, ':');
    if (parts.size() == 1) {
        const double v = tunnel::parse_number(parts[0]);
        return {v, v, 1};
    }
    if (parts.size() != 3) {
        throw tunnel::DomainError("grid must be 'lo:hi:n' or a single value, got '" + text + "'");
    }
    Grid g{tunnel::parse_number(parts[0]), tunnel::parse_number(parts[1]), 0};
    try {
        g.n = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw tunnel::DomainError("grid point count must be an integer, got '" + parts[2] + "'");
    }
    if (g.n < 1 || (g.n > 1 && !(g.lo < g.hi))) {
        throw tunnel::DomainError("grid needs n >= 1 and lo < hi, got '" + text + "'");
    }
    return g;
}

std::vector<double> expand(const Grid& g) {
    if (g.n == 1) {
        return {g.lo};
    }
    std::vector<double> v(static_cast<std::size_t>(g.n));
    const double h = (g.hi - g.lo) / (g.n - 1);
    for (int i = 0; i < g.n; ++i) {
        v[static_cast<std::size_t>(i)] = i + 1 == g.n ? g.hi : g.lo + h * i;
    }
    return v;
}

void warn_admissibility(const tunnel::PacketSpec& p, const tunnel::BarrierSpec& b) {
    for (const auto& w : tunnel::check_admissibility(p, b).warnings()) {
        std::cerr << "warning: " << w << '\n';
    }
}

// --- transmission ----------------------------------------------------------

struct TransmissionArgs {
    double wa = 4.0;
    double La = 0.25;
    double m = 1.0;
    double a = 1.0;
    int k_points = 100;
    OutputOptions out;
};

void setup_transmission(CLI::App& app, TransmissionArgs& args) {
    auto* cmd = app.add_subcommand("transmission", "T, Theta, dTheta/dk and t_T on k = w i/n, i = 1..n");
    cmd->add_option("--wa", args.wa, "Barrier strength w times a")->capture_default_str();
    cmd->add_option("--La", args.La, "Barrier length L over a")->capture_default_str();
    cmd->add_option("--m", args.m, "Particle mass")->capture_default_str();
    cmd->add_option("--a", args.a, "Length unit a (dimensional override)")->capture_default_str();
    cmd->add_option("--k-points", args.k_points, "Number of k samples")->capture_default_str();
    add_output_options(cmd, args.out);
}

void run_transmission(const TransmissionArgs& args) {
    const tunnel::BarrierSpec b{args.wa / args.a, args.La * args.a, args.m};
    write(tunnel::transmission_table(b, args.k_points), args.out);
}

// --- table1 ----------------------------------------------------------------

struct Table1Args {
    std::vector<double> wa = tunnel::table1_wa();
    std::vector<double> La = tunnel::table1_La();
    double k0a = 1.0;
    int grid_points = 4096;
    OutputOptions out;
};

void setup_table1(CLI::App& app, Table1Args& args) {
    auto* cmd = app.add_subcommand("table1", "k_max a over (L/a, w a) at fixed k0 a, with distortion flags");
    cmd->add_option("--wa", args.wa, "Columns: w a values")->delimiter(',')->capture_default_str();
    cmd->add_option("--La", args.La, "Rows: L/a values")->delimiter(',')->capture_default_str();
    cmd->add_option("--k0a", args.k0a, "Spectrum centre k0 times a")->capture_default_str();
    cmd->add_option("--grid-points", args.grid_points, "k_max pre-scan points (>= 2048)")->capture_default_str();
    add_output_options(cmd, args.out);
}

void run_table1(const Table1Args& args) {
    tunnel::KmaxConfig cfg;
    cfg.grid_points = args.grid_points;
    write(tunnel::generate_table1(args.wa, args.La, args.k0a, cfg), args.out);
}

// --- packet ----------------------------------------------------------------

struct PacketArgs {
    std::string kind = "incident";
    std::string axis = "x";
    std::string grid = "-10:10:401";
    std::optional<double> at;
    double wa = 4.0;
    double k0a = 1.0;
    std::optional<double> k0_frac;
    double La = 0.1;
    double m = 1.0;
    double a = 1.0;
    std::optional<double> kcut_frac;
    std::string band = "auto";
    double rel_tol = 1e-8;
    int max_doublings = 20;
    OutputOptions out;
};

void setup_packet(CLI::App& app, PacketArgs& args) {
    auto* cmd = app.add_subcommand("packet", "Sample the incident or transmitted wave packet along x or t");
    cmd->add_option("--kind", args.kind, "Field to synthesize")
        ->check(CLI::IsMember({"incident", "transmitted"}))
        ->capture_default_str();
    cmd->add_option("--axis", args.axis, "Scan along x (fixed t) or t (fixed x)")
        ->check(CLI::IsMember({"x", "t"}))
        ->capture_default_str();
    cmd->add_option("--grid", args.grid, "Scan grid 'lo:hi:n' or a single value (units of a, m a^2)")
        ->capture_default_str();
    cmd->add_option("--at", args.at, "Fixed coordinate: t for an x scan (default 0), x for a t scan (default L)");
    cmd->add_option("--wa", args.wa, "Barrier strength w times a")->capture_default_str();
    cmd->add_option("--k0a", args.k0a, "Spectrum centre k0 times a")->capture_default_str();
    cmd->add_option("--k0-frac", args.k0_frac, "Spectrum centre as a fraction of w (overrides --k0a)");
    cmd->add_option("--La", args.La, "Barrier length L over a")->capture_default_str();
    cmd->add_option("--m", args.m, "Particle mass")->capture_default_str();
    cmd->add_option("--a", args.a, "Packet width a (dimensional override)")->capture_default_str();
    cmd->add_option("--kcut-frac", args.kcut_frac, "Spectral cut-off k_cut as a fraction of w (default none)");
    cmd->add_option("--band", args.band, "Incident band: auto (cut if --kcut-frac, else full), full, barrier, cut")
        ->check(CLI::IsMember({"auto", "full", "barrier", "cut"}))
        ->capture_default_str();
    cmd->add_option("--rel-tol", args.rel_tol, "Quadrature relative tolerance")->capture_default_str();
    cmd->add_option("--max-doublings", args.max_doublings, "Quadrature panel doublings before giving up")
        ->capture_default_str();
    add_output_options(cmd, args.out);
}

void run_packet(const PacketArgs& args) {
    const double w = args.wa / args.a;
    tunnel::BarrierSpec b{w, args.La * args.a, args.m};
    tunnel::PacketSpec p{args.k0_frac ? *args.k0_frac * w : args.k0a / args.a, args.a, std::nullopt};
    if (args.kcut_frac) {
        p.k_cut = *args.kcut_frac * w;
    }
    p.validate(b);
    warn_admissibility(p, b);

    tunnel::FieldRequest req;
    req.kind = args.kind == "transmitted" ? tunnel::FieldKind::Transmitted : tunnel::FieldKind::Incident;
    req.axis = args.axis == "t" ? tunnel::FieldAxis::Time : tunnel::FieldAxis::Space;
    req.fixed = args.at.value_or(req.axis == tunnel::FieldAxis::Time ? b.L : 0.0);
    req.packet = p;
    req.barrier = b;
    if (args.band == "full") {
        req.band = tunnel::SpectralBand::full_line(p);
    } else if (args.band == "barrier") {
        req.band = tunnel::SpectralBand::barrier(b);
    } else if (args.band == "cut") {
        if (!p.k_cut) {
            throw tunnel::DomainError("--band cut needs --kcut-frac");
        }
        req.band = tunnel::SpectralBand::cut_off(*p.k_cut);
    }

    tunnel::QuadratureConfig q;
    q.rel_tol = args.rel_tol;
    q.max_panel_doublings = args.max_doublings;
    const auto grid = expand(parse_grid(args.grid));
    write(tunnel::field_scan(req, grid, q), args.out);
}

// --- times -----------------------------------------------------------------

struct TimesArgs {
    std::string mode = "vs_L";
    std::string policy = "solved";
    std::string grid = "0.05:2:40";
    double wa = 4.0;
    double La = 1.0;
    double k0a = 1.0;
    double m = 1.0;
    OutputOptions out;
};

void setup_times(CLI::App& app, TimesArgs& args) {
    auto* cmd = app.add_subcommand("times", "Phase time t_T and opaque-limit time along L or along w");
    cmd->add_option("--mode", args.mode, "vs_L: grid over L/a at fixed w a; vs_w: grid over w a at fixed L/a")
        ->check(CLI::IsMember({"vs_L", "vs_w"}))
        ->capture_default_str();
    cmd->add_option("--policy", args.policy, "Wavenumber used: solved k_max or naive k0")
        ->check(CLI::IsMember({"solved", "naive"}))
        ->capture_default_str();
    cmd->add_option("--grid", args.grid, "Swept values 'lo:hi:n' or a single value")->capture_default_str();
    cmd->add_option("--wa", args.wa, "Fixed w a (vs_L)")->capture_default_str();
    cmd->add_option("--La", args.La, "Fixed L/a (vs_w)")->capture_default_str();
    cmd->add_option("--k0a", args.k0a, "Spectrum centre k0 times a")->capture_default_str();
    cmd->add_option("--m", args.m, "Particle mass")->capture_default_str();
    add_output_options(cmd, args.out);
}

void run_times(const TimesArgs& args) {
    const auto grid = expand(parse_grid(args.grid));
    const tunnel::SweepFixed fixed{args.wa, args.La, args.k0a, args.m};
    write(tunnel::sweep_phase_time(args.mode == "vs_w" ? tunnel::SweepMode::VsW : tunnel::SweepMode::VsL, fixed,
                                   grid,
                                   args.policy == "naive" ? tunnel::KmaxPolicy::NaiveK0
                                                          : tunnel::KmaxPolicy::Solved),
          args.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary-phase analysis of tunneling through a rectangular barrier"};
    app.require_subcommand(1);

    TransmissionArgs transmission;
    Table1Args table1;
    PacketArgs packet;
    TimesArgs times;
    setup_transmission(app, transmission);
    setup_table1(app, table1);
    setup_packet(app, packet);
    setup_times(app, times);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        auto* cmd = app.get_subcommands().front();
        if (const auto* cfg = cmd->get_option("--config"); cfg->count() > 0) {
            apply_config(cmd, cfg->as<std::string>());
        }
        if (app.got_subcommand("transmission")) {
            run_transmission(transmission);
        } else if (app.got_subcommand("table1")) {
            run_table1(table1);
        } else if (app.got_subcommand("packet")) {
            run_packet(packet);
        } else if (app.got_subcommand("times")) {
            run_times(times);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const tunnel::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const tunnel::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const tunnel::WindowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const tunnel::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
