#include "focuslab/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace focuslab {

void OpticalConfig::validate() const
{
	auto require = [](bool ok, const char *what) {
		if (!ok)
			throw std::invalid_argument(what);
	};
	require(std::isfinite(a_mm) && std::isfinite(f_mm) && std::isfinite(g) &&
			std::isfinite(pixel_pitch_mm) && std::isfinite(d_max),
		"optical parameters must be finite");
	require(f_mm > 0.0, "f_mm must be > 0");
	require(a_mm > f_mm, "a_mm must be greater than f_mm");
	require(g > 0.0, "g must be > 0");
	require(pixel_pitch_mm > 0.0, "pixel_pitch_mm must be > 0");
	require(d_max > 0.0, "d_max must be > 0");
}

BlurRadius blur_radius(const OpticalConfig &cfg, LensState lens)
{
	const double mm = (cfg.a_mm - cfg.f_mm) / (2.0 * cfg.a_mm * cfg.g) * std::abs(lens.z_mm);
	return { mm, mm / cfg.pixel_pitch_mm };
}

LensState lens_for_radius(const OpticalConfig &cfg, double radius_px)
{
	return { radius_px * cfg.pixel_pitch_mm * 2.0 * cfg.a_mm * cfg.g / (cfg.a_mm - cfg.f_mm) };
}

PsfKernel::PsfKernel(int size, double radius_px, std::vector<double> weights)
	: size_(size), radius_px_(radius_px), weights_(std::move(weights))
{
	if (size < 1 || size % 2 == 0)
		throw std::invalid_argument("kernel size must be odd and positive");
	if (weights_.size() != static_cast<std::size_t>(size) * size)
		throw std::invalid_argument("kernel weight count does not match size");
}

PsfKernel make_pillbox_psf(double radius_px, int supersample)
{
	if (!(radius_px >= 0.0) || !std::isfinite(radius_px))
		throw std::invalid_argument("pillbox radius must be >= 0, got " + std::to_string(radius_px));
	if (supersample < 1)
		throw std::invalid_argument("supersample must be >= 1");

	if (radius_px < 0.5)
		return { 1, radius_px, { 1.0 } };

	const int r = static_cast<int>(std::ceil(radius_px));
	const int size = 2 * r + 1;
	const double r2 = radius_px * radius_px;

	/*
	 * Coverage depends only on (max(|dx|, |dy|), min(|dx|, |dy|)), so it is
	 * computed once per octant cell; this makes the kernel exactly
	 * symmetric under 90 degree rotation and mirroring.
	 */
	std::vector<double> coverage(static_cast<std::size_t>(r + 1) * (r + 1), 0.0);
	auto cov = [&](int a, int b) -> double & {
		return coverage[static_cast<std::size_t>(a) * (r + 1) + b];
	};
	const double step = 1.0 / supersample;
	for (int a = 0; a <= r; a++) {
		for (int b = 0; b <= a; b++) {
			int inside = 0;
			for (int i = 0; i < supersample; i++) {
				const double x = a - 0.5 + (i + 0.5) * step;
				for (int j = 0; j < supersample; j++) {
					const double y = b - 0.5 + (j + 0.5) * step;
					if (x * x + y * y < r2)
						inside++;
				}
			}
			cov(a, b) = static_cast<double>(inside) / (supersample * supersample);
		}
	}

	std::vector<double> weights(static_cast<std::size_t>(size) * size);
	double total = 0.0;
	for (int y = 0; y < size; y++) {
		for (int x = 0; x < size; x++) {
			const int ax = std::abs(x - r);
			const int ay = std::abs(y - r);
			const double w = cov(std::max(ax, ay), std::min(ax, ay));
			weights[static_cast<std::size_t>(y) * size + x] = w;
			total += w;
		}
	}
	for (double &w : weights)
		w /= total;

	return { size, radius_px, std::move(weights) };
}

namespace {

/* A run of equal nonzero weights along one kernel row, in source offsets. */
struct WeightRun {
	int dy;
	int x0;
	int x1;
	double weight;
};

std::vector<WeightRun> compressRuns(const PsfKernel &psf)
{
	const int r = psf.half();
	std::vector<WeightRun> runs;
	for (int sy = -r; sy <= r; sy++) {
		int sx = -r;
		while (sx <= r) {
			/* Convolution: source offset (sx, sy) sees weight h(-sx, -sy). */
			const double w = psf.weight(r - sx, r - sy);
			int end = sx;
			while (end + 1 <= r && psf.weight(r - end - 1, r - sy) == w)
				end++;
			if (w != 0.0)
				runs.push_back({ sy, sx, end, w });
			sx = end + 1;
		}
	}
	return runs;
}

} /* namespace */

Image convolve(const Image &scene, const PsfKernel &psf)
{
	const int w = scene.width();
	const int h = scene.height();
	if (psf.size() > w || psf.size() > h)
		throw std::invalid_argument("kernel " + std::to_string(psf.size()) + "x" +
					    std::to_string(psf.size()) + " larger than " +
					    std::to_string(w) + "x" + std::to_string(h) + " image");

	if (psf.size() == 1)
		return scene;

	const int r = psf.half();
	const std::vector<WeightRun> runs = compressRuns(psf);

	/* Prefix sums over each row, padded by r replicated samples per side. */
	const std::size_t stride = static_cast<std::size_t>(w) + 2 * r + 1;
	std::vector<std::int64_t> prefix(stride * h);
	for (int y = 0; y < h; y++) {
		auto src = scene.row(y);
		std::int64_t *p = &prefix[stride * y];
		p[0] = 0;
		for (int q = 0; q < w + 2 * r; q++)
			p[q + 1] = p[q] + src[std::clamp(q - r, 0, w - 1)];
	}

	std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h);
	std::vector<double> acc(w);
	for (int y = 0; y < h; y++) {
		std::fill(acc.begin(), acc.end(), 0.0);
		for (const WeightRun &run : runs) {
			const std::int64_t *p = &prefix[stride * std::clamp(y + run.dy, 0, h - 1)];
			const int lo = run.x0 + r;
			const int hi = run.x1 + r + 1;
			for (int x = 0; x < w; x++)
				acc[x] += run.weight * static_cast<double>(p[x + hi] - p[x + lo]);
		}
		std::uint8_t *dst = &out[static_cast<std::size_t>(y) * w];
		for (int x = 0; x < w; x++)
			dst[x] = static_cast<std::uint8_t>(std::clamp(std::round(acc[x]), 0.0, 255.0));
	}
	return { w, h, std::move(out) };
}

std::vector<double> line_spread(const PsfKernel &psf)
{
	std::vector<double> profile(psf.size(), 0.0);
	for (int y = 0; y < psf.size(); y++)
		for (int x = 0; x < psf.size(); x++)
			profile[x] += psf.weight(x, y);
	return profile;
}

EdgeResponse edge_response(const OpticalConfig &cfg, LensState lens, int half_span_px)
{
	const BlurRadius radius = blur_radius(cfg, lens);
	if (half_span_px < 1 || half_span_px < 3.0 * radius.px)
		throw std::invalid_argument("edge response span " + std::to_string(half_span_px) +
					    " px is smaller than 3 x blur radius (" +
					    std::to_string(radius.px) + " px)");

	const std::vector<double> spread = line_spread(make_pillbox_psf(radius.px));
	const int r = static_cast<int>(spread.size()) / 2;

	EdgeResponse response;
	double cumulative = 0.0;
	for (int x = -half_span_px; x <= half_span_px; x++) {
		if (x >= -r && x <= r)
			cumulative += spread[x + r];
		response.positions.push_back(x);
		response.values.push_back(std::clamp(cumulative, 0.0, 1.0));
	}
	return response;
}

EdgeSlope peak_slope(const EdgeResponse &response)
{
	EdgeSlope best{ 0, -1.0 };
	for (std::size_t i = 1; i < response.values.size(); i++) {
		const double slope = response.values[i] - response.values[i - 1];
		const int pos = response.positions[i];
		if (slope > best.value ||
		    (slope == best.value && std::abs(pos) < std::abs(best.position)))
			best = { pos, slope };
	}
	return best;
}

double theoretical_resolution(const OpticalConfig &cfg, LensState lens)
{
	if (lens.z_mm == 0.0)
		return cfg.d_max;
	const double d = 4.0 * cfg.a_mm * cfg.g /
			 (std::numbers::pi * (cfg.a_mm - cfg.f_mm) * std::abs(lens.z_mm));
	return std::min(cfg.d_max, d);
}

Image defocus(const Image &scene, const OpticalConfig &cfg, LensState lens, int supersample)
{
	return convolve(scene, make_pillbox_psf(blur_radius(cfg, lens).px, supersample));
}

Image capture(const Image &scene, const OpticalConfig &cfg, LensState lens,
	      const NoiseSpec &noise, int supersample)
{
	return add_noise(defocus(scene, cfg, lens, supersample), noise);
}

} /* namespace focuslab */
