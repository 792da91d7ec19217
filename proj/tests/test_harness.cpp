#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "bbr/harness.hpp"

using namespace bbr;

namespace {

SuiteOptions small_options() {
    SuiteOptions o;
    o.members_per_cell = 2;
    o.sample_points = 16;
    o.identity_cases = 4;
    o.oracle_cases = 2;
    o.f_cases = 4;
    return o;
}

}  // namespace

TEST_CASE("grid parsing") {
    const Grid g = parse_grid("k=2,3;beta=0.5");
    CHECK(g.k == std::vector<double>{2.0, 3.0});
    CHECK(g.beta == std::vector<double>{0.5});
    CHECK(g.sigma == Grid{}.sigma);
    CHECK_THROWS_AS((void)parse_grid(""), DomainError);
    CHECK_THROWS_AS((void)parse_grid("q=1"), DomainError);
    CHECK_THROWS_AS((void)parse_grid("k="), DomainError);
    CHECK_THROWS_AS((void)parse_grid("k=abc"), DomainError);
    const Grid h = grid_from_json(json{{"n", {0, 3}}});
    CHECK(h.n == std::vector<int>{0, 3});
    CHECK(h.k == Grid{}.k);
}

TEST_CASE("invalid grid entries are skipped with a reason") {
    Grid g;
    g.k = {1.5};
    g.beta = {0.0};
    g.sigma = {1.0};
    g.n = {1};
    const auto cases = run_suite(g, small_options());
    const auto it = std::find_if(cases.begin(), cases.end(), [](const auto& c) { return c.name == "grid.entry"; });
    REQUIRE(it != cases.end());
    CHECK(it->status == CaseStatus::skipped);
    CHECK(it->detail.find("k < 2") != std::string::npos);
    CHECK_FALSE(any_failed(cases));
}

TEST_CASE("small suite passes and is deterministic") {
    Grid g;
    g.k = {4.0};
    g.beta = {0.25};
    g.sigma = {2.5};
    g.n = {1};
    const auto a = run_suite(g, small_options());
    const auto b = run_suite(g, small_options());
    std::ostringstream ra, rb;
    write_report(ra, a);
    write_report(rb, b);
    CHECK(ra.str() == rb.str());
    CHECK_FALSE(any_failed(a));
    CHECK(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.name < y.name; }));
    for (const auto& c : a) {
        CHECK(c.measured <= c.tolerance + (c.status == CaseStatus::skipped ? INFINITY : 0.0));
    }
    auto opts = small_options();
    opts.seed = 8;
    std::ostringstream rc;
    write_report(rc, run_suite(g, opts));
    CHECK(rc.str() != ra.str());
}

TEST_CASE("cases roundtrip through json") {
    VerificationCase c;
    c.name = "x.y";
    c.params = {3.0, 0.25};
    c.spec = TransformSpec{TransformKind::second, 2.5, 2};
    c.tolerance = 1e-12;
    c.status = CaseStatus::fail;
    c.measured = 1e-9;
    c.witness = json{{"l", 3}};
    const auto d = case_from_json(case_to_json(c));
    CHECK(d.name == c.name);
    CHECK(d.params.k == 3.0);
    REQUIRE(d.spec);
    CHECK(d.spec->n == 2);
    CHECK(d.status == CaseStatus::fail);
    CHECK(d.witness == c.witness);
    CHECK(case_status_from_string("skipped") == CaseStatus::skipped);
}

TEST_CASE("sharpness scan") {
    const ClassParams cp{4.0, 0.0};
    const auto rows = sharpness_scan(cp, {TransformKind::first, 1.0, 0}, {0.0, 0.2, 0.5});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].bound == doctest::Approx(1.0));
    CHECK(std::abs(rows[1].bound - 0.25) <= 1e-12);
    for (const auto& r : rows) {
        CHECK(r.gap <= 1e-8);
    }
    CHECK(rows[1].inside);
    CHECK_FALSE(rows[2].inside);
    CHECK(rows[2].sign == -1);
    CHECK_THROWS_AS((void)sharpness_scan(cp, {}, {0.99}), DomainError);
}

TEST_CASE("one failing case marks the run as failed") {
    std::vector<VerificationCase> cases(3);
    cases[1].status = CaseStatus::skipped;
    CHECK_FALSE(any_failed(cases));
    cases[2].status = CaseStatus::fail;
    CHECK(any_failed(cases));
    std::ostringstream os;
    write_summary(os, cases);
    CHECK(os.str().find("fail") != std::string::npos);
}
