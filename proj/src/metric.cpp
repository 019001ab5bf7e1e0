#include "focuslab/metric.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

#include "focuslab/csv.hpp"

namespace focuslab {

std::string_view to_string(MetricKind kind)
{
	switch (kind) {
	case MetricKind::Squared:
		return "squared";
	case MetricKind::Absolute:
		return "absolute";
	}
	return "unknown";
}

MetricKind parse_metric_kind(std::string_view name)
{
	if (name == "squared")
		return MetricKind::Squared;
	if (name == "absolute")
		return MetricKind::Absolute;
	throw std::invalid_argument("unknown metric \"" + std::string(name) +
				    "\" (expected squared or absolute)");
}

namespace {

template<typename Term>
std::uint64_t robertsCross(const Image &image, const WindowSpec &window, Term term)
{
	const int x0 = window.left();
	const int n = window.n;
	std::uint64_t sum = 0;
	for (int i = 0; i + 1 < n; i++) {
		const std::uint8_t *upper = image.row(window.top() + i).data() + x0;
		const std::uint8_t *lower = image.row(window.top() + i + 1).data() + x0;
		std::uint64_t rowSum = 0;
		for (int j = 0; j + 1 < n; j++) {
			const int d1 = upper[j] - lower[j + 1];
			const int d2 = lower[j] - upper[j + 1];
			rowSum += term(d1) + term(d2);
		}
		sum += rowSum;
	}
	return sum;
}

} /* namespace */

std::uint64_t resolution(const Image &image, const WindowSpec &window, MetricKind kind)
{
	window.check(image);
	if (kind == MetricKind::Squared)
		return robertsCross(image, window, [](int d) { return static_cast<std::uint64_t>(d * d); });
	return robertsCross(image, window, [](int d) { return static_cast<std::uint64_t>(std::abs(d)); });
}

Summary summarize(std::span<const std::uint64_t> values)
{
	if (values.empty())
		throw std::invalid_argument("cannot summarise an empty set of measurements");

	double sum = 0.0;
	for (std::uint64_t v : values)
		sum += static_cast<double>(v);
	const double mean = sum / static_cast<double>(values.size());
	if (values.size() == 1)
		return { mean, 0.0 };

	double ss = 0.0;
	for (std::uint64_t v : values) {
		const double d = static_cast<double>(v) - mean;
		ss += d * d;
	}
	return { mean, std::sqrt(ss / static_cast<double>(values.size() - 1)) };
}

FocusCurve sweep(const Image &scene, const OpticalConfig &cfg, const WindowSpec &window,
		 MetricKind kind, std::span<const double> z_values, const NoiseSpec &noise,
		 int trials)
{
	cfg.validate();
	window.check(scene);
	if (z_values.empty())
		throw std::invalid_argument("sweep needs at least one z value");
	if (trials < 1)
		throw std::invalid_argument("sweep needs at least one trial per z");
	for (std::size_t k = 1; k < z_values.size(); k++)
		if (!(z_values[k] > z_values[k - 1]))
			throw std::invalid_argument("sweep z values must be strictly increasing");

	FocusCurve curve;
	std::vector<std::uint64_t> values(trials);
	for (std::size_t k = 0; k < z_values.size(); k++) {
		const Image blurred = defocus(scene, cfg, { z_values[k] });
		for (int t = 0; t < trials; t++)
			values[t] = resolution(add_noise(blurred, noise.derived(k, t)), window, kind);
		const Summary s = summarize(values);
		curve.entries.push_back({ z_values[k], s.mean, trials, s.stddev });
	}
	return curve;
}

std::vector<double> linspace(double lo, double hi, int count)
{
	if (count < 1)
		throw std::invalid_argument("linspace needs at least one value");
	if (count == 1)
		return { lo };

	std::vector<double> values(count);
	const int last = count - 1;
	for (int i = 0; i <= last; i++)
		values[i] = ((last - i) * lo + i * hi) / last;
	return values;
}

std::size_t argmax_index(const FocusCurve &curve)
{
	if (curve.entries.empty())
		throw std::invalid_argument("argmax of an empty focus curve");

	std::size_t best = 0;
	for (std::size_t k = 1; k < curve.entries.size(); k++) {
		const FocusSample &c = curve.entries[k];
		const FocusSample &b = curve.entries[best];
		if (c.d_mean > b.d_mean ||
		    (c.d_mean == b.d_mean && std::abs(c.z_mm) < std::abs(b.z_mm)))
			best = k;
	}
	return best;
}

void write_csv(std::ostream &out, const FocusCurve &curve)
{
	out << "z_mm,d_mean,d_stddev,n_trials\n";
	for (const FocusSample &e : curve.entries)
		out << csv::number(e.z_mm) << ',' << csv::number(e.d_mean) << ','
		    << csv::number(e.d_stddev) << ',' << csv::number(e.n_trials) << '\n';
}

} /* namespace focuslab */
