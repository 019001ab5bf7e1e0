#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "focuslab/image.hpp"
#include "focuslab/metric.hpp"
#include "focuslab/optics.hpp"

namespace focuslab {

/*
 * Repeatability of the squared metric for one window size. Dispersion is
 * the signed percent deviation of each measurement from the row mean.
 */
struct StabilityRow {
	int n;
	std::vector<std::uint64_t> measurements;
	double mean;
	std::vector<double> deviations_pct;
	double max_abs_deviation_pct;
};

/* Fills mean and deviations from raw measurements; an all-zero row has zero deviations. */
StabilityRow make_stability_row(int n, std::vector<std::uint64_t> measurements);

struct StabilityReport {
	std::vector<StabilityRow> rows;
};

/*
 * For each window size, `repeats` noisy captures (seed noise.derived(row,
 * repeat)) of the scene at the given lens position, measured with the
 * squared metric on a window centred at (center_x, center_y).
 */
StabilityReport stability_study(const Image &scene, const OpticalConfig &cfg, LensState lens,
				int center_x, int center_y, std::span<const int> sizes,
				const NoiseSpec &noise, int repeats);

/* Header n,measurement_index,d,mean,deviation_pct. */
void write_csv(std::ostream &out, const StabilityReport &report);

struct MetricTiming {
	MetricKind kind;
	int n;
	double mean_ns_per_eval;
};

struct MetricBenchReport {
	std::vector<MetricTiming> timings;
	double argmax_z_squared;
	double argmax_z_absolute;
};

inline constexpr int kDefaultSizes[] = { 5, 9, 17, 31 };

/*
 * Times both metric kinds at each window size (centred on `window`), on a
 * single thread, and locates each kind's best z over a shared noiseless
 * sweep measured on `window`. Timings are host-dependent and reported only.
 */
MetricBenchReport compare_metrics(const Image &scene, const OpticalConfig &cfg,
				  const WindowSpec &window, std::span<const double> z_values,
				  int repeats_for_timing,
				  std::span<const int> sizes = kDefaultSizes);

/* Header kind,n,mean_ns_per_eval,argmax_z_mm. */
void write_csv(std::ostream &out, const MetricBenchReport &report);

} /* namespace focuslab */
