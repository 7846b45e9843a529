#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noonsim/optics.hpp"
#include "noonsim/projection.hpp"
#include "noonsim/scenarios.hpp"
#include "noonsim/spectral.hpp"

namespace noonsim {

inline constexpr const char* library_version = "0.1.0";

enum class Command { Project, Fringe, Dip, Visibility, Cases };

inline Command parse_command(const std::string& name) {
    if (name == "project") return Command::Project;
    if (name == "fringe") return Command::Fringe;
    if (name == "dip") return Command::Dip;
    if (name == "visibility") return Command::Visibility;
    if (name == "cases") return Command::Cases;
    throw InvalidRequest("unknown command '" + name + "'");
}

/// Everything a scan needs, assembled from flags or a config file. Optional
/// fields keep their "not supplied" state so validation can tell apart a
/// default and an explicit value.
struct ScanRequest {
    Command command = Command::Fringe;
    int n = 4;
    std::optional<double> sigma_plus;
    std::optional<double> sigma_minus;
    std::optional<double> ratio_ea;
    std::optional<double> phi_start;
    std::optional<double> phi_end;
    int points = 64;
    std::optional<double> dt_start;
    std::optional<double> dt_end;
    std::optional<double> dx;
    std::optional<double> fringe_spacing;
    FringeScheme scheme = FringeScheme::TypeII;
};

/// Named metadata plus named, equally long, finite real columns, both in
/// fixed order so identical requests serialize to identical bytes.
struct ScanResult {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::pair<std::string, std::vector<double>>> columns;
};

namespace detail {

/// Shortest-faithful decimal: 17 significant digits round-trip a double
/// exactly and never depend on the locale.
inline std::string format_value(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::vector<double> linear_grid(double start, double end, int points) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            start + (end - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

/// Periodic sweeps stop one step short of `end` so the seam point is not
/// sampled twice.
inline std::vector<double> periodic_grid(double start, double end, int points) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            start + (end - start) * static_cast<double>(i) / static_cast<double>(points);
    return grid;
}

inline void check_finite(const ScanResult& result) {
    for (const auto& [name, values] : result.columns)
        for (const double v : values)
            if (!std::isfinite(v))
                throw Error("NonFiniteResult", "column '" + name + "' is not finite");
}

} // namespace detail

/// Runs one scan. Deterministic: no clocks, no randomness, no environment.
inline ScanResult run(const ScanRequest& req) {
    ScanResult result;
    auto meta = [&result](const std::string& key, const std::string& value) {
        result.metadata.emplace_back(key, value);
    };

    const bool has_sigmas = req.sigma_plus.has_value() || req.sigma_minus.has_value();
    if (req.sigma_plus.has_value() != req.sigma_minus.has_value())
        throw InvalidRequest("sigma-plus and sigma-minus must be supplied together");
    if (has_sigmas && (!(*req.sigma_plus > 0) || !(*req.sigma_minus > 0)))
        throw InvalidRequest("bandwidths must be positive");
    if (req.ratio_ea && !(*req.ratio_ea >= 0 && *req.ratio_ea <= 1))
        throw InvalidRequest("ratio-ea must lie in [0, 1]");
    if (req.points < 2) throw InvalidRequest("points must be at least 2");
    if (req.phi_start.has_value() != req.phi_end.has_value())
        throw InvalidRequest("phi-start and phi-end must be supplied together");
    if (req.phi_start && !(*req.phi_start < *req.phi_end))
        throw InvalidRequest("phi range must have start < end");
    if (req.dt_start.has_value() != req.dt_end.has_value())
        throw InvalidRequest("dt-start and dt-end must be supplied together");
    if (req.dt_start && !(*req.dt_start < *req.dt_end))
        throw InvalidRequest("dt range must have start < end");
    if (req.dx && !(*req.dx >= 0)) throw InvalidRequest("dx must be non-negative");
    if (req.fringe_spacing && !(*req.fringe_spacing > 0))
        throw InvalidRequest("fringe-spacing must be positive");

    meta("version", library_version);
    meta("angle_unit", "rad");
    meta("time_unit", "s");
    meta("rate_unit", "arbitrary");

    switch (req.command) {
    case Command::Fringe: {
        meta("command", "fringe");
        meta("n", std::to_string(req.n));
        if (req.n < 1 || req.n > 8) throw InvalidRequest("n must lie in [1, 8]");
        const auto phis = detail::periodic_grid(req.phi_start.value_or(0.0),
                                                req.phi_end.value_or(2.0 * std::numbers::pi),
                                                req.points);
        const auto state = SuperpositionCoeffs<double>::noon(req.n);
        std::vector<double> probs(phis.size());
        for (std::size_t i = 0; i < phis.size(); ++i)
            probs[i] = noon_projection(state, phis[i]);
        result.columns.emplace_back("phi", phis);
        result.columns.emplace_back("probability", std::move(probs));
        break;
    }
    case Command::Project: {
        meta("command", "project");
        meta("n", std::to_string(req.n));
        if (req.n < 2 || req.n > 8) throw InvalidRequest("n must lie in [2, 8]");
        const auto phis = detail::periodic_grid(req.phi_start.value_or(0.0),
                                                req.phi_end.value_or(2.0 * std::numbers::pi),
                                                req.points);

        const auto net = build_noon_network<double>(req.n);
        const auto dets = detector_operators(net);
        const auto base = SuperpositionCoeffs<double>::noon(req.n);

        double kappa = 1;
        for (int q = 1; q <= req.n; ++q)
            kappa *= static_cast<double>(q) / (2.0 * req.n);
        meta("network_scale", detail::format_value(kappa));

        std::vector<double> sim(phis.size()), closed(phis.size());
        for (std::size_t i = 0; i < phis.size(); ++i) {
            const auto input =
                base.with_phase(phis[i]).to_state().embedded(net.transform.modes());
            sim[i] = coincidence_probability(input, dets);
            closed[i] = kappa * noon_projection(base, phis[i]);
        }
        result.columns.emplace_back("phi", phis);
        result.columns.emplace_back("coincidence", std::move(sim));
        result.columns.emplace_back("closed_form", std::move(closed));
        break;
    }
    case Command::Dip: {
        meta("command", "dip");
        if (!has_sigmas)
            throw InvalidRequest("dip requires sigma-plus and sigma-minus");
        if (req.ratio_ea)
            throw InvalidRequest("dip takes a source model, not ratio-ea");
        const auto jsa =
            JointSpectralAmplitude<double>::gaussian(*req.sigma_plus, *req.sigma_minus);
        const double tc = jsa.coherence_time();
        meta("sigma_plus", detail::format_value(*req.sigma_plus));
        meta("sigma_minus", detail::format_value(*req.sigma_minus));
        meta("coherence_time", detail::format_value(tc));
        const double start = req.dt_start.value_or(-5.0 * tc);
        const double end = req.dt_end.value_or(5.0 * tc);
        const auto dts = detail::linear_grid(start, end, req.points);
        auto p4 = p4_delay_curve(jsa, dts);
        result.columns.emplace_back("dt", dts);
        result.columns.emplace_back("p4", std::move(p4));
        break;
    }
    case Command::Visibility: {
        meta("command", "visibility");
        if (has_sigmas == req.ratio_ea.has_value())
            throw InvalidRequest(
                "visibility needs exactly one of {sigma pair, ratio-ea}");
        OverlapSet<double> os;
        if (has_sigmas) {
            const auto jsa = JointSpectralAmplitude<double>::gaussian(*req.sigma_plus,
                                                                      *req.sigma_minus);
            meta("sigma_plus", detail::format_value(*req.sigma_plus));
            meta("sigma_minus", detail::format_value(*req.sigma_minus));
            os = overlaps(jsa);
        } else {
            meta("ratio_ea", detail::format_value(*req.ratio_ea));
            os = OverlapSet<double>::from_ratio(*req.ratio_ea);
        }
        double v2 = 1.0;
        if (req.dx) {
            if (!req.fringe_spacing)
                throw InvalidRequest("dx requires fringe-spacing");
            v2 = v2_from_geometry(
                MisalignmentGeometry<double>::from_spacing(*req.dx, *req.fringe_spacing));
            meta("dx", detail::format_value(*req.dx));
            meta("fringe_spacing", detail::format_value(*req.fringe_spacing));
        }
        meta("scheme", req.scheme == FringeScheme::TypeII ? "type2" : "type1");
        const double vis = misaligned_visibility(os, v2, req.scheme);
        result.columns.emplace_back("a", std::vector<double>{os.a});
        result.columns.emplace_back("e", std::vector<double>{os.e.real()});
        result.columns.emplace_back("ratio_ea", std::vector<double>{os.ratio_ea()});
        result.columns.emplace_back("v2", std::vector<double>{v2});
        result.columns.emplace_back("visibility", std::vector<double>{vis});
        break;
    }
    case Command::Cases: {
        meta("command", "cases");
        result.columns.emplace_back(
            "g4_2x2", std::vector<double>{g4_typeII<double>(PairTimingCase::TwoByTwo)});
        result.columns.emplace_back(
            "g4_4x1", std::vector<double>{g4_typeII<double>(PairTimingCase::FourByOne)});
        result.columns.emplace_back(
            "g4_1x4", std::vector<double>{g4_typeII<double>(PairTimingCase::OneByFour)});
        break;
    }
    }

    const std::size_t rows = result.columns.empty() ? 0 : result.columns.front().second.size();
    for (const auto& [name, values] : result.columns)
        if (values.size() != rows)
            throw Error("NonFiniteResult", "column lengths differ");
    detail::check_finite(result);
    return result;
}

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw InvalidRequest("unknown format '" + name + "'");
}

/// Serializes a result. CSV carries the columns only (header then rows, LF
/// endings, 17 significant digits); JSON carries the metadata object and the
/// column arrays and parses back to the identical result.
inline std::string emit(const ScanResult& result, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        std::string out;
        for (std::size_t c = 0; c < result.columns.size(); ++c) {
            if (c) out += ',';
            out += result.columns[c].first;
        }
        out += '\n';
        const std::size_t rows =
            result.columns.empty() ? 0 : result.columns.front().second.size();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < result.columns.size(); ++c) {
                if (c) out += ',';
                out += detail::format_value(result.columns[c].second[r]);
            }
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    auto& meta = doc["metadata"];
    meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.metadata) meta[key] = value;
    auto& cols = doc["columns"];
    cols = nlohmann::ordered_json::object();
    for (const auto& [name, values] : result.columns) cols[name] = values;
    return doc.dump(2) + "\n";
}

/// Parses emit()'s JSON back into a result, bit-exact on every value.
inline ScanResult parse_json(const std::string& text) {
    const auto doc = nlohmann::ordered_json::parse(text);
    ScanResult result;
    for (const auto& [key, value] : doc.at("metadata").items())
        result.metadata.emplace_back(key, value.get<std::string>());
    for (const auto& [name, values] : doc.at("columns").items())
        result.columns.emplace_back(name, values.get<std::vector<double>>());
    return result;
}

} // namespace noonsim
