#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noonsim/scan.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

using namespace noonsim;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<double>& column(const ScanResult& r, const std::string& name) {
    for (const auto& [key, values] : r.columns)
        if (key == name) return values;
    FAIL("missing column ", name);
    static const std::vector<double> empty;
    return empty;
}

std::string metadata(const ScanResult& r, const std::string& name) {
    for (const auto& [key, value] : r.metadata)
        if (key == name) return value;
    FAIL("missing metadata ", name);
    return {};
}

}  // namespace

TEST_CASE("command and format names parse") {
    CHECK(parse_command("fringe") == Command::Fringe);
    CHECK(parse_command("project") == Command::Project);
    CHECK(parse_command("dip") == Command::Dip);
    CHECK(parse_command("visibility") == Command::Visibility);
    CHECK(parse_command("cases") == Command::Cases);
    CHECK_THROWS_AS(parse_command("warble"), InvalidRequest);
    CHECK(parse_format("csv") == OutputFormat::Csv);
    CHECK(parse_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_format("yaml"), InvalidRequest);
}

TEST_CASE("fringe scan walks an open periodic grid") {
    ScanRequest req;
    req.command = Command::Fringe;
    const auto result = run(req);

    const auto& phi = column(result, "phi");
    const auto& prob = column(result, "probability");
    REQUIRE(phi.size() == 64);
    REQUIRE(prob.size() == 64);
    CHECK(phi.front() == 0.0);
    CHECK(phi.back() == doctest::Approx(2.0 * pi * 63.0 / 64.0).epsilon(1e-15));
    for (std::size_t i = 0; i < phi.size(); ++i) {
        CHECK(prob[i] == doctest::Approx(1.0 - std::cos(4.0 * phi[i])).epsilon(1e-12));
    }
    CHECK(metadata(result, "command") == "fringe");
    CHECK(metadata(result, "n") == "4");
    CHECK(metadata(result, "angle_unit") == "rad");
}

TEST_CASE("fringe scan honours a custom range") {
    ScanRequest req;
    req.command = Command::Fringe;
    req.n = 2;
    req.phi_start = 1.0;
    req.phi_end = 3.0;
    req.points = 10;
    const auto result = run(req);
    const auto& phi = column(result, "phi");
    REQUIRE(phi.size() == 10);
    CHECK(phi.front() == doctest::Approx(1.0));
    // open interval: last sample sits one step short of the end
    CHECK(phi.back() == doctest::Approx(1.0 + 2.0 * 9.0 / 10.0).epsilon(1e-15));
}

TEST_CASE("projection scan matches its closed form") {
    ScanRequest req;
    req.command = Command::Project;
    req.n = 2;
    req.points = 16;
    const auto result = run(req);
    const auto& phi = column(result, "phi");
    const auto& sim = column(result, "coincidence");
    const auto& closed = column(result, "closed_form");
    REQUIRE(phi.size() == 16);
    const double kappa = 2.0 / 16.0;  // n!/(2n)^n at n=2
    for (std::size_t i = 0; i < phi.size(); ++i) {
        CHECK(sim[i] == doctest::Approx(closed[i]).epsilon(1e-9));
        CHECK(closed[i] ==
              doctest::Approx(kappa * (1.0 - std::cos(2.0 * phi[i]))).epsilon(1e-12));
    }
    CHECK(std::stod(metadata(result, "network_scale")) == doctest::Approx(kappa));
}

TEST_CASE("dip scan centres an inclusive delay grid") {
    ScanRequest req;
    req.command = Command::Dip;
    req.sigma_plus = 1.0;
    req.sigma_minus = 1.0;
    req.points = 101;
    const auto result = run(req);
    const auto& dt = column(result, "dt");
    const auto& p4 = column(result, "p4");
    REQUIRE(dt.size() == 101);
    REQUIRE(p4.size() == 101);
    CHECK(dt[50] == doctest::Approx(0.0));
    CHECK(dt.front() == doctest::Approx(-5.0));
    CHECK(dt.back() == doctest::Approx(5.0));
    // factorizable source: complete cancellation at zero delay
    double mx = 0;
    for (double v : p4) mx = std::max(mx, std::abs(v));
    CHECK(std::abs(p4[50]) < 1e-6 * mx);
    CHECK(metadata(result, "time_unit") == "s");
    CHECK(std::stod(metadata(result, "coherence_time")) == doctest::Approx(1.0));
}

TEST_CASE("visibility from a ratio fills one row") {
    ScanRequest req;
    req.command = Command::Visibility;
    req.ratio_ea = 0.5;
    const auto result = run(req);
    CHECK(column(result, "a").at(0) == doctest::Approx(1.0));
    CHECK(column(result, "e").at(0) == doctest::Approx(0.5));
    CHECK(column(result, "ratio_ea").at(0) == doctest::Approx(0.5));
    CHECK(column(result, "v2").at(0) == doctest::Approx(1.0));
    // (a + 5e)/(3(a + e)) at e/a = 1/2
    CHECK(column(result, "visibility").at(0) ==
          doctest::Approx(3.5 / 4.5).epsilon(1e-12));
    CHECK(metadata(result, "scheme") == "type2");
}

TEST_CASE("visibility honours scheme and misalignment") {
    ScanRequest req;
    req.command = Command::Visibility;
    req.ratio_ea = 1.0;
    req.scheme = FringeScheme::TypeI;
    const auto result = run(req);
    CHECK(metadata(result, "scheme") == "type1");
    CHECK(column(result, "visibility").at(0) == doctest::Approx(1.0).epsilon(1e-12));

    req.dx = 0.5;
    req.fringe_spacing = 1.0;
    const auto misaligned = run(req);
    const double v2 = 4.0 / (pi * pi);
    CHECK(column(misaligned, "v2").at(0) == doctest::Approx(v2).epsilon(1e-12));
    // type-one misaligned: 3(a+2e)v2^2 / ((6+v2^2)a + 2e(3-2v2))
    const double expect = 3.0 * 3.0 * v2 * v2 /
                          ((6.0 + v2 * v2) + 2.0 * (3.0 - 2.0 * v2));
    CHECK(column(misaligned, "visibility").at(0) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("visibility from a source model") {
    ScanRequest req;
    req.command = Command::Visibility;
    req.sigma_plus = 0.5;
    req.sigma_minus = 1.5;
    const auto result = run(req);
    const double r = 0.5 / 1.5;
    CHECK(column(result, "ratio_ea").at(0) ==
          doctest::Approx(2.0 * r / (1.0 + r * r)).epsilon(1e-9));
    const double ratio = column(result, "ratio_ea").at(0);
    CHECK(column(result, "visibility").at(0) ==
          doctest::Approx((1.0 + 5.0 * ratio) / (3.0 * (1.0 + ratio))).epsilon(1e-9));
}

TEST_CASE("cases command tabulates the timing constants") {
    ScanRequest req;
    req.command = Command::Cases;
    const auto result = run(req);
    CHECK(column(result, "g4_2x2").at(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(column(result, "g4_4x1").at(0) == doctest::Approx(0.0));
    CHECK(column(result, "g4_1x4").at(0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("invalid requests are rejected up front") {
    auto expect_invalid = [](ScanRequest req) {
        CHECK_THROWS_AS(run(req), InvalidRequest);
    };

    ScanRequest req;
    req.points = 1;
    expect_invalid(req);

    req = {};
    req.command = Command::Dip;
    expect_invalid(req);  // no source model

    req = {};
    req.command = Command::Dip;
    req.sigma_plus = 1.0;
    expect_invalid(req);  // half a source model

    req = {};
    req.command = Command::Dip;
    req.sigma_plus = 1.0;
    req.sigma_minus = 1.0;
    req.ratio_ea = 0.5;
    expect_invalid(req);  // ratio does not describe a source

    req = {};
    req.command = Command::Visibility;
    expect_invalid(req);  // needs exactly one description

    req = {};
    req.command = Command::Visibility;
    req.ratio_ea = 0.5;
    req.sigma_plus = 1.0;
    req.sigma_minus = 1.0;
    expect_invalid(req);  // both descriptions

    req = {};
    req.command = Command::Visibility;
    req.ratio_ea = 1.5;
    expect_invalid(req);

    req = {};
    req.command = Command::Visibility;
    req.ratio_ea = 0.5;
    req.dx = 0.5;
    expect_invalid(req);  // dx without fringe spacing

    req = {};
    req.command = Command::Fringe;
    req.n = 9;
    expect_invalid(req);

    req = {};
    req.command = Command::Project;
    req.n = 1;
    expect_invalid(req);

    req = {};
    req.phi_start = 0.0;
    expect_invalid(req);  // unpaired range

    req = {};
    req.command = Command::Dip;
    req.sigma_plus = 1.0;
    req.sigma_minus = 1.0;
    req.dt_start = 2.0;
    req.dt_end = -2.0;
    expect_invalid(req);

    req = {};
    req.command = Command::Dip;
    req.sigma_plus = -1.0;
    req.sigma_minus = 1.0;
    expect_invalid(req);
}

TEST_CASE("csv output is line-per-row with full precision") {
    ScanRequest req;
    req.command = Command::Fringe;
    req.points = 5;
    const auto result = run(req);
    const auto text = emit(result, OutputFormat::Csv);

    CHECK(text.find('\r') == std::string::npos);
    REQUIRE(!text.empty());
    CHECK(text.back() == '\n');

    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 6);  // header + five rows
    CHECK(lines[0] == "phi,probability");

    // round-trip: printed digits recover the doubles bit for bit
    const auto& phi = column(result, "phi");
    const auto& prob = column(result, "probability");
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& line = lines[i + 1];
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == phi[i]);
        CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == prob[i]);
    }
}

TEST_CASE("csv of an empty column set is just the header") {
    ScanResult result;
    result.columns.emplace_back("x", std::vector<double>{});
    CHECK(emit(result, OutputFormat::Csv) == "x\n");
}

TEST_CASE("json output round-trips exactly") {
    ScanRequest req;
    req.command = Command::Visibility;
    req.ratio_ea = 0.375;
    const auto result = run(req);
    const auto text = emit(result, OutputFormat::Json);
    const auto back = parse_json(text);

    REQUIRE(back.metadata == result.metadata);
    REQUIRE(back.columns.size() == result.columns.size());
    for (std::size_t i = 0; i < back.columns.size(); ++i) {
        CHECK(back.columns[i].first == result.columns[i].first);
        REQUIRE(back.columns[i].second.size() == result.columns[i].second.size());
        for (std::size_t j = 0; j < back.columns[i].second.size(); ++j)
            CHECK(back.columns[i].second[j] == result.columns[i].second[j]);
    }
}

TEST_CASE("repeat runs emit identical bytes") {
    ScanRequest req;
    req.command = Command::Dip;
    req.sigma_plus = 0.7;
    req.sigma_minus = 1.1;
    req.points = 21;
    const auto first = emit(run(req), OutputFormat::Csv);
    const auto second = emit(run(req), OutputFormat::Csv);
    CHECK(first == second);
    const auto j1 = emit(run(req), OutputFormat::Json);
    const auto j2 = emit(run(req), OutputFormat::Json);
    CHECK(j1 == j2);
}
