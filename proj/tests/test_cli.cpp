#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "bbr/cli.hpp"
#include "bbr/io.hpp"

using namespace bbr;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("radius prints the closed form") {
    const auto r = run({"radius", "--k", "4", "--beta", "0", "--precision", "8"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "k,beta,radius\r\n4.0000000,0.0000000,0.26794919\r\n");
    const auto chk = run({"radius", "--k", "3", "--beta", "0.25", "--numeric-check"});
    REQUIRE(chk.code == kExitOk);
    const auto t = read_table_csv(chk.out);
    CHECK(t.header == std::vector<std::string>{"k", "beta", "closed_form", "lo", "hi", "discrepancy", "order"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][5] <= 1e-5);
}

TEST_CASE("domain and usage errors exit with 2") {
    const auto r = run({"radius", "--k", "1.5", "--beta", "0"});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("k < 2") != std::string::npos);
    CHECK(run({"radius", "--k", "4", "--beta", "1"}).code == kExitConfig);
    CHECK(run({"coeffs", "--j", "2", "--sigma", "1", "--n", "3"}).code == kExitConfig);
    CHECK(run({"bound", "--r-grid", "0:0.99:0.1"}).code == kExitConfig);
    CHECK(run({"radius", "--format", "xml"}).code == kExitConfig);
    CHECK(run({"nosuch"}).code == kExitConfig);
    CHECK(run({"verify", "--grid", "q=1"}).code == kExitConfig);
    CHECK(run({"transform"}, "{not json").code == kExitConfig);
    CHECK(run({"verify", "--order", "4"}).code == kExitConfig);
}

TEST_CASE("coeffs lists the multipliers") {
    const auto r = run({"coeffs", "--j", "1", "--sigma", "1", "--n", "1", "--max-l", "3", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const auto t = read_table_json(r.out);
    REQUIRE(t.rows.size() == 3);
    for (const auto& row : t.rows) {
        CHECK(row[1] == doctest::Approx(1.0 / (row[0] + 1.0)).epsilon(1e-11));
    }
}

TEST_CASE("bound rows") {
    const auto r = run({"bound", "--k", "4", "--beta", "0", "--r-grid", "0.2:0.2:0.1"});
    REQUIRE(r.code == kExitOk);
    const auto t = read_table_csv(r.out);
    CHECK(t.header == std::vector<std::string>{"r", "bound", "value_at_H", "gap"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(t.rows[0][3] <= 1e-8);
}

TEST_CASE("transform reads a measure from standard input") {
    const ClassParams cp{4.0, 0.0};
    const std::string doc = measure_to_json(extremal_measure(cp), cp).dump();
    const auto r = run({"transform", "--j", "1", "--sigma", "1", "--n", "1", "--order", "8"}, doc);
    REQUIRE(r.code == kExitOk);
    const auto t = read_table_csv(r.out);
    REQUIRE(t.rows.size() == 9);
    // H has -4 at odd l; averaging divides by l + 1
    CHECK(t.rows[3][1] == doctest::Approx(-1.0));
    CHECK(t.rows[2][1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("verify reports cases and a summary") {
    const auto r = run({"verify", "--grid", "k=3;beta=0.25;sigma=2.5;n=1;j=2", "--seed", "3"});
    CHECK(r.code == kExitOk);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto j = json::parse(line);
        CHECK(j.contains("name"));
        CHECK(j.at("status") != "fail");
        ++count;
    }
    CHECK(count > 10);
    CHECK(r.err.find("family") != std::string::npos);
    const auto again = run({"verify", "--grid", "k=3;beta=0.25;sigma=2.5;n=1;j=2", "--seed", "3"});
    CHECK(again.out == r.out);
    const auto skipped = run({"verify", "--grid", "k=1.5"});
    CHECK(skipped.code == kExitOk);
    CHECK(skipped.out.find("\"skipped\"") != std::string::npos);
}

TEST_CASE("BBR_ORDER sets the default truncation order") {
    const ClassParams cp{4.0, 0.0};
    const std::string doc = measure_to_json(extremal_measure(cp), cp).dump();
    ::setenv("BBR_ORDER", "5", 1);
    const auto r = run({"transform"}, doc);
    CHECK(read_table_csv(r.out).rows.size() == 6);
    ::setenv("BBR_ORDER", "zero", 1);
    CHECK(run({"transform"}, doc).code == kExitConfig);
    ::unsetenv("BBR_ORDER");
    CHECK(read_table_csv(run({"transform"}, doc).out).rows.size() == 65);
}
