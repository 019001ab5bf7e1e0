#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace focuslab {

/*
 * 8-bit grayscale raster, row-major, origin at the top-left corner with x
 * growing rightwards and y downwards. Used both for scenes and for the
 * images a (simulated) camera captures of them.
 *
 * Images are immutable once built; generators assemble a sample vector and
 * hand it over to the constructor.
 */
class Image
{
public:
	Image(int width, int height, std::uint8_t fill = 0);
	Image(int width, int height, std::vector<std::uint8_t> samples);

	int width() const { return width_; }
	int height() const { return height_; }

	std::uint8_t at(int x, int y) const
	{
		return samples_[static_cast<std::size_t>(y) * width_ + x];
	}

	std::span<const std::uint8_t> row(int y) const
	{
		return { samples_.data() + static_cast<std::size_t>(y) * width_,
			 static_cast<std::size_t>(width_) };
	}

	std::span<const std::uint8_t> samples() const { return samples_; }

	bool operator==(const Image &other) const = default;

private:
	int width_;
	int height_;
	std::vector<std::uint8_t> samples_;
};

/*
 * N x N measurement window ("nucleus"). For even n the centre is the pixel
 * just above-left of the geometric centre, so in both cases the window's
 * top-left corner is centre - (n - 1) / 2.
 */
struct WindowSpec {
	int center_x = 0;
	int center_y = 0;
	int n = 2;

	int left() const { return center_x - (n - 1) / 2; }
	int top() const { return center_y - (n - 1) / 2; }

	bool fits(const Image &image) const;
	/* Throws std::out_of_range when the window leaves the image. */
	void check(const Image &image) const;

	static WindowSpec centered(const Image &image, int n);
};

/* Additive Gaussian noise, in gray levels. sigma == 0 is the identity. */
struct NoiseSpec {
	double sigma = 0.0;
	std::uint64_t seed = 1;

	/* Independent stream for sub-task (a, b), e.g. (probe, trial). */
	NoiseSpec derived(std::uint64_t a, std::uint64_t b) const;
};

class PgmError : public std::runtime_error
{
public:
	enum class Kind {
		Missing,
		UnsupportedVariant,
		MalformedHeader,
		UnsupportedMaxval,
		Truncated,
		Io,
	};

	PgmError(Kind kind, const std::string &what)
		: std::runtime_error(what), kind_(kind)
	{
	}

	Kind kind() const { return kind_; }

private:
	Kind kind_;
};

Image load_pgm(const std::filesystem::path &path);
void save_pgm(const Image &image, const std::filesystem::path &path);

/* Columns >= edge_x take `high`, the others `low`. */
Image make_step_edge(int width, int height, int edge_x, std::uint8_t low, std::uint8_t high);

/*
 * Detail-rich pseudo-random scene with the 1/f amplitude spectrum of
 * natural images, stretched to the full 8-bit range (1% of the pixels
 * saturate at each end). Deterministic in (width, height, seed).
 */
Image make_texture(int width, int height, std::uint64_t seed);

Image add_noise(const Image &image, const NoiseSpec &noise);

} /* namespace focuslab */
