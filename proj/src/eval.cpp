#include "epiforecast/eval.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

namespace epiforecast::eval {

std::vector<MetricReport> rank(std::vector<MetricReport> reports) {
	// Group order must not depend on input order, so groups sort by key too.
	auto group_key = [](const MetricReport &r) { return std::tie(r.country, r.interval); };
	auto cell_key = [](const MetricReport &r) {
		return std::make_tuple(!r.ok(), r.ok() ? r.rmse : 0.0, r.ok() ? r.mae : 0.0, r.ok() ? r.mape_pct : 0.0,
		                       std::cref(r.model));
	};
	std::sort(reports.begin(), reports.end(), [&](const MetricReport &a, const MetricReport &b) {
		if (group_key(a) != group_key(b)) {
			return group_key(a) < group_key(b);
		}
		return cell_key(a) < cell_key(b);
	});
	for (std::size_t i = 0; i < reports.size();) {
		std::size_t j = i;
		int next = 1;
		while (j < reports.size() && group_key(reports[j]) == group_key(reports[i])) {
			reports[j].rank = reports[j].ok() ? next++ : 0;
			++j;
		}
		i = j;
	}
	return reports;
}

} // namespace epiforecast::eval
