#include <doctest.h>

#include <sstream>

#include "bbr/io.hpp"

using namespace bbr;

TEST_CASE("number formatting keeps the requested significant digits") {
    CHECK(format_number(0.5, 6) == "0.500000");
    CHECK(format_number(2.0 - std::sqrt(3.0), 4) == "0.2679");
    CHECK(format_number(1234.5, 3) == "1.23e+03");
    CHECK(format_number(std::nan(""), 5) == "nan");
    CHECK(format_number(-INFINITY, 5) == "-inf");
    CHECK_THROWS_AS(OutputFormat({OutputKind::csv, 0}).validate(), DomainError);
    CHECK_THROWS_AS(OutputFormat({OutputKind::csv, 18}).validate(), DomainError);
    CHECK(output_kind_from_string("json") == OutputKind::json);
    CHECK_THROWS_AS((void)output_kind_from_string("xml"), DomainError);
}

TEST_CASE("csv quoting roundtrip") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const auto rows = parse_csv("x,\"a,b\",\"q\"\"\"\r\n1,2,3\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == "a,b");
    CHECK(rows[0][2] == "q\"");
    CHECK(rows[1][2] == "3");
}

TEST_CASE("tables roundtrip through csv and json") {
    const Table t{{"r", "bound"}, {{0.0, 1.0}, {0.25, 1.0 / 3.0}}};
    for (OutputKind kind : {OutputKind::csv, OutputKind::json}) {
        std::ostringstream os;
        write_table(os, t, {kind, 17});
        const Table back = kind == OutputKind::csv ? read_table_csv(os.str()) : read_table_json(os.str());
        CHECK(back.header == t.header);
        CHECK(back.rows == t.rows);
    }
    std::ostringstream os;
    write_table(os, t, {OutputKind::csv, 4});
    CHECK(os.str() == "r,bound\r\n0.000,1.000\r\n0.2500,0.3333\r\n");
    CHECK_THROWS_AS((void)read_table_csv("a,b\r\n1\r\n"), FormatError);
    CHECK_THROWS_AS((void)read_table_json("{"), FormatError);
}

TEST_CASE("value types roundtrip through json") {
    const ClassParams cp{4.0, 0.25};
    const auto m = extremal_measure(cp);
    const auto doc = measure_from_json(measure_to_json(m, cp));
    CHECK(doc.params.k == cp.k);
    CHECK(doc.params.beta == cp.beta);
    REQUIRE(doc.measure.atoms().size() == m.atoms().size());
    for (std::size_t i = 0; i < m.atoms().size(); ++i) {
        CHECK(doc.measure.atoms()[i].s == m.atoms()[i].s);
        CHECK(doc.measure.atoms()[i].w == m.atoms()[i].w);
    }
    CHECK_THROWS_AS((void)measure_from_json(json{{"atoms", json::array()}, {"k", 1.0}, {"beta", 0.0}}), std::exception);

    const auto s = extremal_H(cp, 16);
    const auto s2 = series_from_json(series_to_json(s));
    CHECK(max_coeff_distance(s, s2) == 0.0);
    CHECK(s2.tail_bound_rate() == s.tail_bound_rate());

    RadiusReport r;
    r.closed_form = 0.5;
    r.lo = 0.49;
    r.hi = 0.51;
    r.discrepancy = 0.01;
    const auto r2 = radius_report_from_json(radius_report_to_json(r));
    CHECK(r2.closed_form == r.closed_form);
    CHECK(r2.lo == r.lo);
    CHECK(r2.discrepancy == r.discrepancy);
    RadiusReport unknown;
    CHECK_FALSE(radius_report_from_json(radius_report_to_json(unknown)).closed_form);

    const NormalizedFunction f(TruncatedSeries({1.0, complex(0.5, -0.25)}), 2.5);
    const auto f2 = normalized_function_from_json(normalized_function_to_json(f));
    CHECK(f2.sigma == 2.5);
    CHECK(max_coeff_distance(f.unit_series, f2.unit_series) == 0.0);
}
