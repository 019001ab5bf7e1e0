#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "focuslab/image.hpp"
#include "focuslab/optics.hpp"

namespace focuslab {

/*
 * Roberts-cross resolution functions over an N x N window:
 *   squared:  sum over (N-1)^2 cells of (e[i][j] - e[i+1][j+1])^2 + (e[i+1][j] - e[i][j+1])^2
 *   absolute: the same with |.| in place of (.)^2
 */
enum class MetricKind {
	Squared,
	Absolute,
};

std::string_view to_string(MetricKind kind);
/* Accepts "squared" / "absolute"; throws std::invalid_argument otherwise. */
MetricKind parse_metric_kind(std::string_view name);

/*
 * Exact integer result. The worst case of a 1024 x 1024 window is
 * 1023^2 * 2 * 255^2, comfortably inside 64 bits.
 */
std::uint64_t resolution(const Image &image, const WindowSpec &window, MetricKind kind);

struct FocusSample {
	double z_mm;
	double d_mean;
	int n_trials;
	double d_stddev;	/* sample standard deviation, 0 for a single trial */
};

struct FocusCurve {
	std::vector<FocusSample> entries;
};

/*
 * Measures the metric at every z (strictly increasing). Trial t at z index
 * k uses noise.derived(k, t), so results do not depend on evaluation order.
 */
FocusCurve sweep(const Image &scene, const OpticalConfig &cfg, const WindowSpec &window,
		 MetricKind kind, std::span<const double> z_values, const NoiseSpec &noise,
		 int trials);

/* Index of the largest d_mean; ties go to the smaller |z|, then the smaller z. */
std::size_t argmax_index(const FocusCurve &curve);

/* Header z_mm,d_mean,d_stddev,n_trials. */
void write_csv(std::ostream &out, const FocusCurve &curve);

/*
 * count evenly spaced values from lo to hi inclusive. Computed as a
 * weighted sum of the end points, so a symmetric range yields exactly
 * mirrored values and an exact 0 at its middle.
 */
std::vector<double> linspace(double lo, double hi, int count);

/* Mean and sample standard deviation of a set of measurements. */
struct Summary {
	double mean;
	double stddev;
};

Summary summarize(std::span<const std::uint64_t> values);

} /* namespace focuslab */
