#include "focuslab/autofocus.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "focuslab/csv.hpp"

namespace focuslab {

void SearchParams::validate() const
{
	if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_min < z_max))
		throw std::invalid_argument("search interval needs z_min < z_max");
	if (coarse_steps < 5)
		throw std::invalid_argument("coarse_steps must be >= 5");
	if (refine_iterations < 0)
		throw std::invalid_argument("refine_iterations must be >= 0");
	if (trials_per_eval < 1)
		throw std::invalid_argument("trials_per_eval must be >= 1");
}

std::string_view to_string(SearchPhase phase)
{
	return phase == SearchPhase::Coarse ? "coarse" : "refine";
}

namespace {

class Prober
{
public:
	Prober(const Image &scene, const OpticalConfig &cfg, const WindowSpec &window,
	       const NoiseSpec &noise, const SearchParams &params)
		: scene_(scene), cfg_(cfg), window_(window), noise_(noise), params_(params),
		  values_(params.trials_per_eval)
	{
	}

	double operator()(double z, SearchPhase phase)
	{
		const std::uint64_t probe = trace_.size();
		const Image blurred = defocus(scene_, cfg_, { z });
		for (int t = 0; t < params_.trials_per_eval; t++)
			values_[t] = resolution(add_noise(blurred, noise_.derived(probe, t)),
						window_, params_.metric);
		const double d = summarize(values_).mean;
		trace_.push_back({ z, d, phase });
		return d;
	}

	std::vector<TraceEntry> &trace() { return trace_; }

private:
	const Image &scene_;
	const OpticalConfig &cfg_;
	const WindowSpec &window_;
	const NoiseSpec &noise_;
	const SearchParams &params_;
	std::vector<std::uint64_t> values_;
	std::vector<TraceEntry> trace_;
};

/* Strictly better value, or an equal one closer to z = 0. */
bool preferred(double z, double d, double zRef, double dRef)
{
	return d > dRef || (d == dRef && std::abs(z) < std::abs(zRef));
}

} /* namespace */

AutofocusResult autofocus(const Image &scene, const OpticalConfig &cfg, const WindowSpec &window,
			  const NoiseSpec &noise, const SearchParams &params)
{
	cfg.validate();
	params.validate();
	window.check(scene);

	Prober probe(scene, cfg, window, noise, params);

	const int steps = params.coarse_steps;
	const std::vector<double> grid = linspace(params.z_min, params.z_max, steps);

	int winner = 0;
	double winnerD = probe(grid[0], SearchPhase::Coarse);
	for (int i = 1; i < steps; i++) {
		const double d = probe(grid[i], SearchPhase::Coarse);
		if (preferred(grid[i], d, grid[winner], winnerD)) {
			winner = i;
			winnerD = d;
		}
	}

	AutofocusResult result{};

	/*
	 * A winner at an end of the grid leaves no bracket around the peak:
	 * the focus may lie outside the interval, so report that end as is.
	 */
	if (winner == 0 || winner == steps - 1) {
		result.trace = std::move(probe.trace());
		result.z_star = grid[winner];
		result.d_star = winnerD;
		result.evaluations = static_cast<int>(result.trace.size()) * params.trials_per_eval;
		result.at_boundary = true;
		return result;
	}

	double a = grid[winner - 1];
	double b = grid[winner + 1];

	if (params.refine_iterations > 0) {
		const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
		double c = b - invPhi * (b - a);
		double d = a + invPhi * (b - a);
		double fc = probe(c, SearchPhase::Refine);
		double fd = probe(d, SearchPhase::Refine);

		for (int it = 1; it <= params.refine_iterations; it++) {
			const bool last = it == params.refine_iterations;
			if (preferred(c, fc, d, fd) || (fc == fd && std::abs(c) == std::abs(d))) {
				b = d;
				d = c;
				fd = fc;
				c = b - invPhi * (b - a);
				if (!last)
					fc = probe(c, SearchPhase::Refine);
			} else {
				a = c;
				c = d;
				fc = fd;
				d = a + invPhi * (b - a);
				if (!last)
					fd = probe(d, SearchPhase::Refine);
			}
			result.brackets.emplace_back(a, b);
		}
	}

	result.trace = std::move(probe.trace());
	std::size_t best = 0;
	for (std::size_t k = 1; k < result.trace.size(); k++) {
		const TraceEntry &e = result.trace[k];
		if (preferred(e.z_mm, e.d_mean, result.trace[best].z_mm, result.trace[best].d_mean))
			best = k;
	}
	result.z_star = result.trace[best].z_mm;
	result.d_star = result.trace[best].d_mean;
	result.evaluations = static_cast<int>(result.trace.size()) * params.trials_per_eval;
	result.at_boundary = false;
	return result;
}

void write_trace_csv(std::ostream &out, const AutofocusResult &result)
{
	out << "step,z_mm,d_mean,phase\n";
	for (std::size_t k = 0; k < result.trace.size(); k++) {
		const TraceEntry &e = result.trace[k];
		out << k << ',' << csv::number(e.z_mm) << ',' << csv::number(e.d_mean) << ','
		    << to_string(e.phase) << '\n';
	}
}

} /* namespace focuslab */
