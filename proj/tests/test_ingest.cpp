#include "epiforecast/csv.hpp"
#include "epiforecast/ingest.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace epiforecast;
using namespace epiforecast::ingest;

namespace {

const char *const kHeader = "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20,1/24/20,1/25/20,1/26/20\n";

std::string fixture() {
	return std::string(kHeader) +
	       "North,Atlantis,1.0,2.0,0,1,3,5,8\n"
	       "South,Atlantis,1.5,2.5,0,0,2,4,4\n"
	       ",Bolivar,3.0,4.0,1,2,3,4,5\n";
}

template <typename Fn>
std::pair<ErrorKind, std::string> error_of(Fn &&fn) {
	try {
		fn();
	} catch (const Error &e) {
		return {e.kind(), e.what()};
	}
	FAIL("expected an epiforecast::Error");
	return {ErrorKind::InvalidArgument, ""};
}

std::string fixture_path() { return EPIFORECAST_FIXTURE; }

} // namespace

TEST_CASE("JHU date headers") {
	CHECK(parse_jhu_date("1/22/20") == make_date(2020, 1, 22));
	CHECK(parse_jhu_date("12/31/21") == make_date(2021, 12, 31));
	CHECK(error_of([] { parse_jhu_date("2020-01-22"); }).first == ErrorKind::FormatError);
}

TEST_CASE("parse hand-built fixture") {
	const RawCaseTable t = parse_jhu_csv(fixture());
	CHECK(t.rows.size() == 3);
	CHECK(t.dates.size() == 5);
	CHECK(t.dates.front() == make_date(2020, 1, 22));
	CHECK(t.rows[0].province == std::optional<std::string>("North"));
	CHECK_FALSE(t.rows[2].province.has_value());
	CHECK(t.countries() == std::vector<std::string>{"Atlantis", "Bolivar"});
}

TEST_CASE("quoted fields with commas") {
	const std::string text = std::string(kHeader) + "\"Bonaire, Sint Eustatius and Saba\",Netherlands,1,2,0,0,1,1,2\n";
	const RawCaseTable t = parse_jhu_csv(text);
	CHECK(t.rows[0].province == std::optional<std::string>("Bonaire, Sint Eustatius and Saba"));
	CHECK(t.rows[0].counts.back() == 2);
}

TEST_CASE("parse errors") {
	auto bad_cell = error_of([] { parse_jhu_csv(std::string(kHeader) + ",Atlantis,0,0,1,2,abc,4,5\n"); });
	CHECK(bad_cell.first == ErrorKind::CellError);
	CHECK(bad_cell.second.find("abc") != std::string::npos);
	CHECK(bad_cell.second.find("1/24/20") != std::string::npos);
	CHECK(error_of([] { parse_jhu_csv(std::string(kHeader) + ",Atlantis,0,0,1,2,-3,4,5\n"); }).first ==
	      ErrorKind::CellError);
	CHECK(error_of([] { parse_jhu_csv("Province,Country,Lat,Long,1/22/20\n"); }).first == ErrorKind::FormatError);
	CHECK(error_of([] {
		      parse_jhu_csv("Province/State,Country/Region,Lat,Long,1/23/20,1/22/20\n,A,0,0,1,2\n");
	      }).first == ErrorKind::FormatError);
	CHECK(error_of([] {
		      parse_jhu_csv("Province/State,Country/Region,Lat,Long,1/22/20,1/24/20\n,A,0,0,1,2\n");
	      }).first == ErrorKind::FormatError);
}

TEST_CASE("aggregate sums provinces") {
	const RawCaseTable t = parse_jhu_csv(fixture());
	const TimeSeries a = aggregate_country(t, "Atlantis");
	CHECK(a.values() == (Eigen::VectorXd(5) << 0, 1, 5, 9, 12).finished());
	CHECK(a.start() == make_date(2020, 1, 22));
	const TimeSeries b = aggregate_country(t, "Bolivar");
	CHECK(b.values() == (Eigen::VectorXd(5) << 1, 2, 3, 4, 5).finished());

	// Two provinces [3,5] and [2,4] sum to [5,9].
	const RawCaseTable two = parse_jhu_csv(
	    "Province/State,Country/Region,Lat,Long,1/22/20,1/23/20\nA,X,0,0,3,5\nB,X,0,0,2,4\n");
	CHECK(aggregate_country(two, "X").values() == (Eigen::VectorXd(2) << 5, 9).finished());
}

TEST_CASE("aggregation is permutation invariant and conserves totals") {
	const std::string rows[] = {"North,Atlantis,1.0,2.0,0,1,3,5,8\n", "South,Atlantis,1.5,2.5,0,0,2,4,4\n",
	                            ",Bolivar,3.0,4.0,1,2,3,4,5\n"};
	const RawCaseTable t = parse_jhu_csv(fixture());
	const RawCaseTable r = parse_jhu_csv(std::string(kHeader) + rows[2] + rows[1] + rows[0]);
	CHECK(aggregate_country(t, "Atlantis").values() == aggregate_country(r, "Atlantis").values());
	Eigen::VectorXd total = Eigen::VectorXd::Zero(5);
	for (const auto &c : t.countries()) {
		total += aggregate_country(t, c).values();
	}
	Eigen::VectorXd row_total = Eigen::VectorXd::Zero(5);
	for (const auto &row : t.rows) {
		for (std::size_t i = 0; i < row.counts.size(); ++i) {
			row_total[Eigen::Index(i)] += double(row.counts[i]);
		}
	}
	CHECK(total == row_total);
}

TEST_CASE("unknown country suggests near matches") {
	const RawCaseTable t = parse_jhu_csv(csv::read_file(fixture_path()));
	auto [kind, msg] = error_of([&] { aggregate_country(t, "Indai"); });
	CHECK(kind == ErrorKind::NotFound);
	CHECK(msg.find("India") != std::string::npos);
	CHECK(edit_distance("Indai", "India") == 2);
	CHECK(edit_distance("kitten", "sitting") == 3);
}

TEST_CASE("slice for interval") {
	const RawCaseTable t = parse_jhu_csv(csv::read_file(fixture_path()));
	const TimeSeries india = aggregate_country(t, "India");
	const auto intervals = default_intervals();
	REQUIRE(intervals.size() == 3);
	for (const auto &iv : intervals) {
		CHECK(iv.length_days() == 10);
	}
	const TimeSeries s = slice_for_interval(india, intervals[0]);
	CHECK(s.end() == make_date(2020, 5, 15));
	CHECK(s[0] >= 1.0);
	const IntervalSpec late{"late", make_date(2021, 1, 1), make_date(2021, 1, 10)};
	CHECK(error_of([&] { slice_for_interval(india, late); }).first == ErrorKind::OutOfRange);

	const TimeSeries lead("x", make_date(2020, 1, 1), (Eigen::VectorXd(5) << 0, 0, 1, 4, 9).finished());
	const IntervalSpec iv{"x", make_date(2020, 1, 4), make_date(2020, 1, 5)};
	const TimeSeries cut = slice_for_interval(lead, iv);
	CHECK(cut.start() == make_date(2020, 1, 3));
	CHECK(cut[0] == 1.0);
}

TEST_CASE("interval parsing") {
	const IntervalSpec a = parse_interval("2020-05-06:2020-05-15");
	CHECK(a.label == "6MAY-15MAY");
	CHECK(a.length_days() == 10);
	const IntervalSpec b = parse_interval("early:2020-04-01:2020-04-10");
	CHECK(b.label == "early");
	CHECK(error_of([] { parse_interval("2020-05-15:2020-05-06"); }).first == ErrorKind::InvalidArgument);
	CHECK(error_of([] { parse_interval("bogus"); }).first == ErrorKind::InvalidArgument);
}

TEST_CASE("fixture covers the protocol countries and re-serializes identically") {
	const RawCaseTable t = parse_jhu_csv(csv::read_file(fixture_path()));
	for (const char *c : {"India", "US", "Brazil"}) {
		const TimeSeries s = aggregate_country(t, c);
		CHECK(s.index_of(make_date(2020, 8, 10)).has_value());
		CHECK(downward_revisions(s).empty());
		std::ostringstream out;
		csv::write_series(out, s);
		CHECK(csv::read_series(out.str(), c).values() == s.values());
	}
}

TEST_CASE("downward revisions are reported, not altered") {
	const TimeSeries s("x", make_date(2020, 1, 1), (Eigen::VectorXd(4) << 1, 5, 4, 6).finished());
	CHECK(downward_revisions(s) == std::vector<Date>{make_date(2020, 1, 3)});
}

TEST_CASE("source resolution") {
	CHECK(resolve_source("", "/fallback.csv") == (std::getenv(kDataDirEnv) ? resolve_source("", "") : "/fallback.csv"));
	CHECK(resolve_source("/abs/file.csv", "/fallback.csv") == "/abs/file.csv");
}
