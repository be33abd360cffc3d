#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "alphamax/panel.hpp"
#include "alphamax/rolling.hpp"
#include "helpers.hpp"

using namespace alphamax;

namespace {

bool has_issue(const ValidationReport& report, const std::string& code) {
    for (const auto& issue : report.issues) {
        if (issue.code == code) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("conforming panel validates cleanly") {
    auto [returns, factors] = test_helpers::random_panel(10, 50, 3, 1);
    const ValidationReport report = validate_panel(returns, factors);
    CHECK(report.ok());
    CHECK(report.to_string() == "ok");
}

TEST_CASE("constant factors are flagged as singular covariance") {
    auto [returns, factors] = test_helpers::random_panel(10, 50, 2, 2);
    for (std::size_t c = 0; c < factors.t(); ++c) factors.values(0, c) = 0.7;
    const ValidationReport report = validate_panel(returns, factors);
    CHECK(!report.ok());
    CHECK(has_issue(report, "singular_factor_covariance"));
}

TEST_CASE("degrees-of-freedom bound T >= K + 2") {
    auto [returns, factors] = test_helpers::random_panel(10, 4, 3, 3);
    const ValidationReport report = validate_panel(returns, factors);
    CHECK(has_issue(report, "insufficient_observations"));
}

TEST_CASE("dimension mismatch and tiny cross-section are reported") {
    auto [returns, factors] = test_helpers::random_panel(10, 50, 2, 4);
    auto [short_returns, short_factors] = test_helpers::random_panel(10, 40, 2, 5);
    CHECK(has_issue(validate_panel(returns, short_factors), "dimension_mismatch"));

    auto [tiny, tiny_factors] = test_helpers::random_panel(3, 50, 2, 6);
    tiny.assets.resize(2);
    tiny.assets.shrink_to_fit();
    CHECK(has_issue(validate_panel(tiny, tiny_factors), "dimension_mismatch"));

    auto [two_assets, two_factors] = test_helpers::random_panel(3, 50, 2, 7);
    Matrix small(2, 50);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t s = 0; s < 50; ++s) small(i, s) = two_assets.excess_returns(i, s);
    const ReturnPanel two({"A0", "A1"}, two_assets.dates, std::move(small));
    CHECK(has_issue(validate_panel(two, two_factors), "insufficient_cross_section"));
}

TEST_CASE("panel labels must match the matrix") {
    CHECK_THROWS_AS(ReturnPanel({"A"}, {"D1", "D2"}, Matrix(2, 2)), InvalidArgumentError);
    CHECK_THROWS_AS(FactorPanel({"F1", "F2"}, Matrix(1, 4)), InvalidArgumentError);
}

TEST_CASE("factor subset selects rows by name") {
    auto [returns, factors] = test_helpers::random_panel(5, 30, 3, 8);
    factors.names = {"MKT", "SMB", "HML"};
    const FactorPanel sub = factors.subset({"HML", "MKT"});
    CHECK(sub.names == std::vector<std::string>{"HML", "MKT"});
    for (std::size_t c = 0; c < sub.t(); ++c) {
        CHECK(sub.values(0, c) == factors.values(2, c));
        CHECK(sub.values(1, c) == factors.values(0, c));
    }
    CHECK_THROWS_AS(factors.subset({"MOM"}), InvalidArgumentError);
}

TEST_CASE("panel CSV round-trip is bit-identical") {
    auto [returns, factors] = test_helpers::random_panel(7, 23, 2, 9);
    // Sortable labels, as the readers require.
    for (std::size_t s = 0; s < returns.dates.size(); ++s) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "D%03zu", s);
        returns.dates[s] = buf;
    }
    const auto path = std::filesystem::temp_directory_path() / "alphamax_panel_rt.csv";
    write_panel_csv(returns, path.string());
    const RawSecurityFile raw = read_security_csv(path.string());
    const ReturnTable table = build_returns(raw);
    REQUIRE(table.complete());
    const ReturnPanel back = table.to_panel();
    CHECK(back.assets == returns.assets);
    CHECK(back.dates == returns.dates);
    CHECK(back.excess_returns == returns.excess_returns);
    std::filesystem::remove(path);
}
