#pragma once

#include <vector>

#include "focuslab/image.hpp"

namespace focuslab {

/*
 * Thin-lens defocus model. Distances in millimetres; d_max is the
 * resolution ceiling of the capture device itself (per mm), which the model
 * cannot derive and therefore takes as a parameter.
 */
struct OpticalConfig {
	double a_mm = 1000.0;		/* distance to the object */
	double f_mm = 50.0;		/* focal length */
	double g = 2.0;			/* light intensity (relative aperture) */
	double pixel_pitch_mm = 0.0125;
	double d_max = 100.0;

	/* Throws std::invalid_argument naming the offending field. */
	void validate() const;
};

/* Signed lens displacement from the focused position. */
struct LensState {
	double z_mm = 0.0;
};

struct BlurRadius {
	double mm;
	double px;
};

BlurRadius blur_radius(const OpticalConfig &cfg, LensState lens);

/* Inverse of blur_radius for z >= 0: the displacement giving radius_px. */
LensState lens_for_radius(const OpticalConfig &cfg, double radius_px);

constexpr int kDefaultSupersample = 8;

/*
 * Discretised pillbox. Odd size, unit sum, weight(x, y) indexed from the
 * top-left corner of the support; radius_px is the disc it approximates.
 */
class PsfKernel
{
public:
	PsfKernel(int size, double radius_px, std::vector<double> weights);

	int size() const { return size_; }
	int half() const { return size_ / 2; }
	double radius_px() const { return radius_px_; }
	double weight(int x, int y) const { return weights_[static_cast<std::size_t>(y) * size_ + x]; }
	const std::vector<double> &weights() const { return weights_; }

private:
	int size_;
	double radius_px_;
	std::vector<double> weights_;
};

/*
 * Each weight is the fraction of the pixel's area inside the disc,
 * estimated on a supersample x supersample grid, then renormalised to unit
 * sum. Radii below half a pixel give the 1x1 identity kernel.
 */
PsfKernel make_pillbox_psf(double radius_px, int supersample = kDefaultSupersample);

/*
 * 2-D convolution with clamp-to-edge borders, rounded to the nearest gray
 * level. Throws std::invalid_argument if the kernel is larger than the image.
 */
Image convolve(const Image &scene, const PsfKernel &psf);

/* Column sums of the kernel: the line-spread function, unit sum. */
std::vector<double> line_spread(const PsfKernel &psf);

/*
 * Normalised response U(x) to a unit step at offset 0 (offset 0 is the
 * first pixel of the bright side), for offsets -half_span..half_span.
 */
struct EdgeResponse {
	std::vector<int> positions;
	std::vector<double> values;
};

EdgeResponse edge_response(const OpticalConfig &cfg, LensState lens, int half_span_px);

/*
 * Largest discrete derivative U(x) - U(x - 1) and the offset x it is
 * attributed to; ties go to the offset closest to 0.
 */
struct EdgeSlope {
	int position;
	double value;
};

EdgeSlope peak_slope(const EdgeResponse &response);

/* min(d_max, 4AG / (pi (A - F) |z|)), per mm; d_max at z = 0. */
double theoretical_resolution(const OpticalConfig &cfg, LensState lens);

/* The noiseless part of capture(): scene seen through the defocused lens. */
Image defocus(const Image &scene, const OpticalConfig &cfg, LensState lens,
	      int supersample = kDefaultSupersample);

Image capture(const Image &scene, const OpticalConfig &cfg, LensState lens,
	      const NoiseSpec &noise, int supersample = kDefaultSupersample);

} /* namespace focuslab */
