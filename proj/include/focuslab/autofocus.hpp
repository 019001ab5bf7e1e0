#pragma once

#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "focuslab/image.hpp"
#include "focuslab/metric.hpp"
#include "focuslab/optics.hpp"

namespace focuslab {

struct SearchParams {
	double z_min = -5.0;
	double z_max = 5.0;
	int coarse_steps = 11;
	int refine_iterations = 12;
	int trials_per_eval = 1;
	MetricKind metric = MetricKind::Squared;

	void validate() const;
};

enum class SearchPhase {
	Coarse,
	Refine,
};

std::string_view to_string(SearchPhase phase);

struct TraceEntry {
	double z_mm;
	double d_mean;
	SearchPhase phase;
};

struct AutofocusResult {
	double z_star;
	double d_star;
	int evaluations;
	std::vector<TraceEntry> trace;
	/* Golden-section bracket [lo, hi] after each refinement iteration. */
	std::vector<std::pair<double, double>> brackets;
	/*
	 * The coarse winner is an end of [z_min, z_max]; z_star is that end
	 * and no refinement ran. The true focus may lie outside the interval.
	 */
	bool at_boundary;
};

/*
 * Contrast-detection search for the lens displacement maximising the
 * resolution metric, against the simulated camera.
 *
 * A coarse scan over coarse_steps equally spaced positions picks the best
 * one (ties to the smaller |z|). Golden-section refinement then runs for
 * refine_iterations bracket reductions inside the interval spanned by the
 * winner's neighbours; a winner at either end is returned flagged.
 * Every probe averages trials_per_eval captures and the result is the best
 * probe of the whole trace.
 */
AutofocusResult autofocus(const Image &scene, const OpticalConfig &cfg, const WindowSpec &window,
			  const NoiseSpec &noise, const SearchParams &params);

/* Header step,z_mm,d_mean,phase. */
void write_trace_csv(std::ostream &out, const AutofocusResult &result);

} /* namespace focuslab */
