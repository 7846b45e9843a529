#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "noonsim/scan.hpp"

namespace {

int run_cli(int argc, char** argv) {
    CLI::App app{"Photon-number projection and interference scans"};
    app.set_config("--config");

    std::string command = "fringe";
    std::string scheme = "type2";
    std::string format = "csv";
    std::string out_path;
    noonsim::ScanRequest req;
    double sigma_plus = 0, sigma_minus = 0, ratio_ea = 0;
    double phi_start = 0, phi_end = 0, dt_start = 0, dt_end = 0;
    double dx = 0, fringe_spacing = 0;

    app.add_option("--command", command,
                   "project | fringe | dip | visibility | cases");
    app.add_option("--n", req.n, "photon number for project and fringe");
    auto* opt_sp = app.add_option("--sigma-plus", sigma_plus,
                                  "sum-frequency bandwidth (rad/s)");
    auto* opt_sm = app.add_option("--sigma-minus", sigma_minus,
                                  "difference-frequency bandwidth (rad/s)");
    auto* opt_ratio = app.add_option("--ratio-ea", ratio_ea,
                                     "exchange-to-autocorrelation ratio in [0, 1]");
    auto* opt_ps = app.add_option("--phi-start", phi_start, "phase sweep start (rad)");
    auto* opt_pe = app.add_option("--phi-end", phi_end, "phase sweep end (rad)");
    auto* opt_points = app.add_option("--points", req.points, "samples per sweep");
    auto* opt_ds = app.add_option("--dt-start", dt_start, "delay sweep start (s)");
    auto* opt_de = app.add_option("--dt-end", dt_end, "delay sweep end (s)");
    auto* opt_dx = app.add_option("--dx", dx, "detector offset (m)");
    auto* opt_fs = app.add_option("--fringe-spacing", fringe_spacing,
                                  "spatial fringe period (m)");
    app.add_option("--scheme", scheme, "type1 | type2");
    app.add_option("--format", format, "csv | json");
    app.add_option("--out", out_path, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: InvalidRequest: " << e.what() << "\n";
        return 2;
    }

    try {
        req.command = noonsim::parse_command(command);
        if (*opt_sp) req.sigma_plus = sigma_plus;
        if (*opt_sm) req.sigma_minus = sigma_minus;
        if (*opt_ratio) req.ratio_ea = ratio_ea;
        if (*opt_ps) req.phi_start = phi_start;
        if (*opt_pe) req.phi_end = phi_end;
        if (*opt_ds) req.dt_start = dt_start;
        if (*opt_de) req.dt_end = dt_end;
        if (*opt_dx) req.dx = dx;
        if (*opt_fs) req.fringe_spacing = fringe_spacing;
        if (!*opt_points && req.command == noonsim::Command::Dip) req.points = 101;
        if (scheme == "type1") req.scheme = noonsim::FringeScheme::TypeI;
        else if (scheme == "type2") req.scheme = noonsim::FringeScheme::TypeII;
        else throw noonsim::InvalidRequest("unknown scheme '" + scheme + "'");

        const auto result = noonsim::run(req);
        const auto text = noonsim::emit(result, noonsim::parse_format(format));

        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw noonsim::IOFailure("cannot open '" + out_path + "'");
            file << text;
            if (!file) throw noonsim::IOFailure("cannot write '" + out_path + "'");
        }
        return 0;
    } catch (const noonsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::string(e.name()) == "InvalidRequest" ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
