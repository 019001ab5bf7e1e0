#include "focuslab/image.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

namespace focuslab {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ull;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
	return x ^ (x >> 31);
}

void checkDimensions(int width, int height)
{
	if (width < 1 || height < 1)
		throw std::invalid_argument("image dimensions must be at least 1x1, got " +
					    std::to_string(width) + "x" + std::to_string(height));
}

} /* namespace */

Image::Image(int width, int height, std::uint8_t fill)
	: width_(width), height_(height)
{
	checkDimensions(width, height);
	samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<std::uint8_t> samples)
	: width_(width), height_(height), samples_(std::move(samples))
{
	checkDimensions(width, height);
	if (samples_.size() != static_cast<std::size_t>(width) * height)
		throw std::invalid_argument("sample count does not match image dimensions");
}

bool WindowSpec::fits(const Image &image) const
{
	return n >= 2 && left() >= 0 && top() >= 0 &&
	       left() + n <= image.width() && top() + n <= image.height();
}

void WindowSpec::check(const Image &image) const
{
	if (n < 2)
		throw std::out_of_range("window size must be at least 2, got " + std::to_string(n));
	if (!fits(image)) {
		std::ostringstream msg;
		msg << n << "x" << n << " window centred at (" << center_x << ", " << center_y
		    << ") does not fit in " << image.width() << "x" << image.height() << " image";
		throw std::out_of_range(msg.str());
	}
}

WindowSpec WindowSpec::centered(const Image &image, int n)
{
	return { (image.width() - 1) / 2, (image.height() - 1) / 2, n };
}

NoiseSpec NoiseSpec::derived(std::uint64_t a, std::uint64_t b) const
{
	std::uint64_t s = splitmix64(seed);
	s = splitmix64(s ^ (a * 0x9e3779b97f4a7c15ull));
	s = splitmix64(s ^ (b * 0xc2b2ae3d27d4eb4full));
	return { sigma, s };
}

Image make_step_edge(int width, int height, int edge_x, std::uint8_t low, std::uint8_t high)
{
	checkDimensions(width, height);
	if (edge_x < 0 || edge_x > width)
		throw std::out_of_range("edge_x " + std::to_string(edge_x) +
					" outside [0, " + std::to_string(width) + "]");

	std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * height);
	for (int y = 0; y < height; y++)
		for (int x = 0; x < width; x++)
			samples[static_cast<std::size_t>(y) * width + x] = x >= edge_x ? high : low;
	return { width, height, std::move(samples) };
}

Image make_texture(int width, int height, std::uint64_t seed)
{
	checkDimensions(width, height);

	/*
	 * Plane waves with log-uniform spatial frequencies from one period per
	 * image up to near Nyquist, equal amplitudes, and random orientations and
	 * phases. Equal amplitude per log-frequency bin is a 1/f amplitude
	 * spectrum, so blur-induced detail loss follows the same power law at
	 * every scale.
	 */
	constexpr int kWavesPerOctave = 24;
	const double pi = std::numbers::pi;
	const double kMax = 0.9 * pi;
	const double kMin = std::min(2.0 * pi / std::max(width, height), kMax);
	const int waves = std::max(1, static_cast<int>(std::ceil(kWavesPerOctave * std::log2(kMax / kMin))));

	std::mt19937_64 rng(NoiseSpec{ 0.0, seed }.derived(0x7e47, 0).seed);
	std::uniform_real_distribution<double> unit(0.0, 1.0);

	const std::size_t count = static_cast<std::size_t>(width) * height;
	std::vector<double> field(count, 0.0);
	std::vector<std::complex<double>> alongX(width);
	std::vector<std::complex<double>> alongY(height);
	for (int j = 0; j < waves; j++) {
		const double k = kMin * std::pow(kMax / kMin, (j + unit(rng)) / waves);
		const double theta = 2.0 * pi * unit(rng);
		const double phase = 2.0 * pi * unit(rng);
		const double kx = k * std::cos(theta);
		const double ky = k * std::sin(theta);

		/* cos(kx x + ky y + phase) = Re(e^{i kx x} e^{i (ky y + phase)}) */
		for (int x = 0; x < width; x++)
			alongX[x] = std::polar(1.0, kx * x);
		for (int y = 0; y < height; y++)
			alongY[y] = std::polar(1.0, ky * y + phase);
		for (int y = 0; y < height; y++) {
			const double re = alongY[y].real();
			const double im = alongY[y].imag();
			double *row = &field[static_cast<std::size_t>(y) * width];
			for (int x = 0; x < width; x++)
				row[x] += re * alongX[x].real() - im * alongX[x].imag();
		}
	}

	/* Stretch the 5th..95th percentile range onto [0, 255]. */
	std::vector<double> sorted(field);
	std::sort(sorted.begin(), sorted.end());
	const double lo = sorted[count / 20];
	const double hi = sorted[count - 1 - count / 20];
	const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;

	std::vector<std::uint8_t> samples(count);
	for (std::size_t i = 0; i < count; i++) {
		const double v = std::round((field[i] - lo) * scale);
		samples[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
	}
	return { width, height, std::move(samples) };
}

Image add_noise(const Image &image, const NoiseSpec &noise)
{
	if (noise.sigma < 0.0 || !std::isfinite(noise.sigma))
		throw std::invalid_argument("noise sigma must be a finite value >= 0");
	if (noise.sigma == 0.0)
		return image;

	std::mt19937_64 rng(noise.seed);
	std::normal_distribution<double> gauss(0.0, noise.sigma);

	auto in = image.samples();
	std::vector<std::uint8_t> out(in.size());
	for (std::size_t i = 0; i < in.size(); i++) {
		const double v = std::round(in[i] + gauss(rng));
		out[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
	}
	return { image.width(), image.height(), std::move(out) };
}

} /* namespace focuslab */
