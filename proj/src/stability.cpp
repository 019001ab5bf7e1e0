#include "focuslab/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "focuslab/csv.hpp"

namespace focuslab {

StabilityRow make_stability_row(int n, std::vector<std::uint64_t> measurements)
{
	const Summary summary = summarize(measurements);

	StabilityRow row{ n, std::move(measurements), summary.mean, {}, 0.0 };
	for (std::uint64_t d : row.measurements) {
		const double dev = row.mean == 0.0
			? 0.0
			: 100.0 * (static_cast<double>(d) - row.mean) / row.mean;
		row.deviations_pct.push_back(dev);
		row.max_abs_deviation_pct = std::max(row.max_abs_deviation_pct, std::abs(dev));
	}
	return row;
}

StabilityReport stability_study(const Image &scene, const OpticalConfig &cfg, LensState lens,
				int center_x, int center_y, std::span<const int> sizes,
				const NoiseSpec &noise, int repeats)
{
	cfg.validate();
	if (repeats < 3)
		throw std::invalid_argument("stability study needs at least 3 repeats");
	if (sizes.empty())
		throw std::invalid_argument("stability study needs at least one window size");
	for (int n : sizes)
		WindowSpec{ center_x, center_y, n }.check(scene);

	const Image blurred = defocus(scene, cfg, lens);

	StabilityReport report;
	for (std::size_t row = 0; row < sizes.size(); row++) {
		const WindowSpec window{ center_x, center_y, sizes[row] };
		std::vector<std::uint64_t> measurements;
		for (int r = 0; r < repeats; r++)
			measurements.push_back(resolution(add_noise(blurred, noise.derived(row, r)),
							  window, MetricKind::Squared));
		report.rows.push_back(make_stability_row(sizes[row], std::move(measurements)));
	}
	return report;
}

void write_csv(std::ostream &out, const StabilityReport &report)
{
	out << "n,measurement_index,d,mean,deviation_pct\n";
	for (const StabilityRow &row : report.rows)
		for (std::size_t i = 0; i < row.measurements.size(); i++)
			out << row.n << ',' << i << ',' << csv::number(row.measurements[i]) << ','
			    << csv::number(row.mean) << ',' << csv::number(row.deviations_pct[i]) << '\n';
}

namespace {

double timeMetric(const Image &image, const WindowSpec &window, MetricKind kind, int repeats)
{
	using Clock = std::chrono::steady_clock;

	volatile std::uint64_t sink = 0;
	const auto start = Clock::now();
	for (int i = 0; i < repeats; i++)
		sink = sink + resolution(image, window, kind);
	const auto elapsed = std::chrono::duration<double, std::nano>(Clock::now() - start);
	(void)sink;

	/* A clock tick coarser than the whole loop would report zero. */
	return std::max(elapsed.count(), 1.0) / repeats;
}

} /* namespace */

MetricBenchReport compare_metrics(const Image &scene, const OpticalConfig &cfg,
				  const WindowSpec &window, std::span<const double> z_values,
				  int repeats_for_timing, std::span<const int> sizes)
{
	cfg.validate();
	window.check(scene);
	if (repeats_for_timing < 10)
		throw std::invalid_argument("timing needs at least 10 repeats");
	if (z_values.empty())
		throw std::invalid_argument("metric comparison needs at least one z value");
	for (int n : sizes)
		WindowSpec{ window.center_x, window.center_y, n }.check(scene);

	MetricBenchReport report{};
	for (MetricKind kind : { MetricKind::Squared, MetricKind::Absolute }) {
		for (int n : sizes) {
			const WindowSpec w{ window.center_x, window.center_y, n };
			report.timings.push_back({ kind, n, timeMetric(scene, w, kind, repeats_for_timing) });
		}
	}

	FocusCurve squared;
	FocusCurve absolute;
	for (std::size_t k = 0; k < z_values.size(); k++) {
		if (k > 0 && !(z_values[k] > z_values[k - 1]))
			throw std::invalid_argument("z values must be strictly increasing");
		const Image blurred = defocus(scene, cfg, { z_values[k] });
		squared.entries.push_back({ z_values[k],
					    static_cast<double>(resolution(blurred, window, MetricKind::Squared)),
					    1, 0.0 });
		absolute.entries.push_back({ z_values[k],
					     static_cast<double>(resolution(blurred, window, MetricKind::Absolute)),
					     1, 0.0 });
	}
	report.argmax_z_squared = squared.entries[argmax_index(squared)].z_mm;
	report.argmax_z_absolute = absolute.entries[argmax_index(absolute)].z_mm;
	return report;
}

void write_csv(std::ostream &out, const MetricBenchReport &report)
{
	out << "kind,n,mean_ns_per_eval,argmax_z_mm\n";
	for (const MetricTiming &t : report.timings) {
		const double argmax = t.kind == MetricKind::Squared ? report.argmax_z_squared
								     : report.argmax_z_absolute;
		out << to_string(t.kind) << ',' << t.n << ',' << csv::number(t.mean_ns_per_eval) << ','
		    << csv::number(argmax) << '\n';
	}
}

} /* namespace focuslab */
