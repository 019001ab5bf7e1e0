#pragma once

/*
 * Independent reference implementations used only by the tests. They are
 * written directly from the defining formulas, without sharing code paths
 * with the library.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "focuslab/image.hpp"
#include "focuslab/optics.hpp"

namespace oracle {

/*
 * Roberts-cross sums with 1-based e(i, j) indexing, i = row, j = column,
 * over the window whose top-left sample is (left, top).
 */
inline std::int64_t resolution(const focuslab::Image &img, int left, int top, int n, bool squared)
{
	auto e = [&](int i, int j) -> std::int64_t { return img.at(left + j - 1, top + i - 1); };
	std::int64_t d = 0;
	for (int i = 1; i <= n - 1; i++) {
		for (int j = 1; j <= n - 1; j++) {
			const std::int64_t a = e(i, j) - e(i + 1, j + 1);
			const std::int64_t b = e(i + 1, j) - e(i, j + 1);
			d += squared ? a * a + b * b : std::llabs(a) + std::llabs(b);
		}
	}
	return d;
}

/* Direct 2-D convolution with clamp-to-edge indexing, unrounded. */
inline std::vector<double> convolve(const focuslab::Image &img, const focuslab::PsfKernel &k)
{
	const int w = img.width(), h = img.height(), r = k.size() / 2;
	std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
	for (int y = 0; y < h; y++)
		for (int x = 0; x < w; x++) {
			double acc = 0.0;
			for (int v = -r; v <= r; v++)
				for (int u = -r; u <= r; u++) {
					const int sx = std::clamp(x - u, 0, w - 1);
					const int sy = std::clamp(y - v, 0, h - 1);
					acc += img.at(sx, sy) * k.weight(u + r, v + r);
				}
			out[static_cast<std::size_t>(y) * w + x] = acc;
		}
	return out;
}

/*
 * Analytic line-spread density of a disc of radius R integrated over one
 * pixel column [x - 1/2, x + 1/2]: integral of 2 sqrt(R^2 - t^2) / (pi R^2)
 * by composite Simpson quadrature.
 */
inline double column_integral(double R, double x, int panels = 2000)
{
	auto f = [R](double t) {
		const double s = R * R - t * t;
		return s > 0.0 ? 2.0 * std::sqrt(s) / (M_PI * R * R) : 0.0;
	};
	const double a = x - 0.5, b = x + 0.5, hstep = (b - a) / panels;
	double sum = f(a) + f(b);
	for (int i = 1; i < panels; i++)
		sum += f(a + i * hstep) * (i % 2 ? 4.0 : 2.0);
	return sum * hstep / 3.0;
}

inline focuslab::Image random_image(std::mt19937_64 &rng, int w, int h)
{
	std::uniform_int_distribution<int> level(0, 255);
	std::vector<std::uint8_t> s(static_cast<std::size_t>(w) * h);
	for (auto &v : s)
		v = static_cast<std::uint8_t>(level(rng));
	return { w, h, std::move(s) };
}

inline double sample_stddev(const std::vector<double> &v)
{
	double mean = 0.0;
	for (double x : v)
		mean += x;
	mean /= v.size();
	double ss = 0.0;
	for (double x : v)
		ss += (x - mean) * (x - mean);
	return std::sqrt(ss / (v.size() - 1));
}

} /* namespace oracle */
