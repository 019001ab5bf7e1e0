/*
 * focuslab - focus measurement, defocus simulation and autofocus from the
 * command line.
 *
 * Machine-readable output (metric values, CSV) goes to stdout or to the
 * --out / --trace files; diagnostics go to stderr.
 */

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "focuslab/autofocus.hpp"
#include "focuslab/csv.hpp"
#include "focuslab/image.hpp"
#include "focuslab/metric.hpp"
#include "focuslab/optics.hpp"
#include "focuslab/stability.hpp"

using namespace focuslab;

namespace {

/* A usage error attributable to a specific flag. */
struct FlagError : std::runtime_error {
	FlagError(const std::string &flag, const std::string &what)
		: std::runtime_error(flag + ": " + what)
	{
	}
};

struct GlobalOptions {
	OpticalConfig optics;
	std::optional<double> sigma;
	std::uint64_t seed = 1;
	int cx = -1;
	int cy = -1;
	int n = 31;
	std::string metric = "squared";

	void validate() const
	{
		if (!(optics.a_mm > optics.f_mm))
			throw FlagError("--a-mm", "must be greater than --f-mm");
	}

	NoiseSpec noise(double defaultSigma) const { return { sigma.value_or(defaultSigma), seed }; }

	/* Window over `image`, centred on the image unless --cx/--cy are given. */
	WindowSpec window(const Image &image, int size) const
	{
		WindowSpec w = WindowSpec::centered(image, size);
		if (cx >= 0)
			w.center_x = cx;
		if (cy >= 0)
			w.center_y = cy;
		if (!w.fits(image))
			throw FlagError("--n/--cx/--cy",
					std::to_string(size) + "x" + std::to_string(size) +
						" window centred at (" + std::to_string(w.center_x) + ", " +
						std::to_string(w.center_y) + ") does not fit in " +
						std::to_string(image.width()) + "x" +
						std::to_string(image.height()) + " image");
		return w;
	}

	WindowSpec window(const Image &image) const { return window(image, n); }
};

void addGlobalOptions(CLI::App &app, GlobalOptions &g)
{
	auto group = "Optics, noise and window";
	app.add_option("--a-mm", g.optics.a_mm, "distance to the object (mm)")
		->check(CLI::PositiveNumber)->capture_default_str()->group(group);
	app.add_option("--f-mm", g.optics.f_mm, "focal length (mm)")
		->check(CLI::PositiveNumber)->capture_default_str()->group(group);
	app.add_option("--g", g.optics.g, "light intensity / relative aperture")
		->check(CLI::PositiveNumber)->capture_default_str()->group(group);
	app.add_option("--pixel-pitch-mm", g.optics.pixel_pitch_mm, "sensor pixel size (mm)")
		->check(CLI::PositiveNumber)->capture_default_str()->group(group);
	app.add_option("--d-max", g.optics.d_max, "resolution ceiling of the device (1/mm)")
		->check(CLI::PositiveNumber)->capture_default_str()->group(group);
	app.add_option("--sigma", g.sigma,
		       "additive Gaussian noise, gray levels (default 0; 2 for stability)")
		->check(CLI::NonNegativeNumber)->group(group);
	app.add_option("--seed", g.seed, "seed for noise and texture generation")
		->capture_default_str()->group(group);
	app.add_option("--cx", g.cx, "window centre column (default: image centre)")
		->check(CLI::NonNegativeNumber)->group(group);
	app.add_option("--cy", g.cy, "window centre row (default: image centre)")
		->check(CLI::NonNegativeNumber)->group(group);
	app.add_option("--n", g.n, "window size in pixels")
		->check(CLI::Range(2, 1024))->capture_default_str()->group(group);
	app.add_option("--metric", g.metric, "squared or absolute")
		->check(CLI::IsMember({ "squared", "absolute" }))->capture_default_str()->group(group);
}

/* Writes to `path`, or stdout when path is empty. */
void emit(const std::string &path, const std::function<void(std::ostream &)> &write)
{
	if (path.empty()) {
		write(std::cout);
		std::cout.flush();
		return;
	}
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw std::runtime_error(path + ": cannot open for writing");
	write(out);
	out.flush();
	if (!out)
		throw std::runtime_error(path + ": write failed");
	std::cerr << "wrote " << path << "\n";
}

std::vector<double> zRange(double zMin, double zMax, int steps)
{
	if (steps < 1)
		throw FlagError("--z-steps", "z range is empty");
	if (steps == 1 ? zMin != zMax : !(zMin < zMax))
		throw FlagError("--z-min/--z-max", "z range is empty or reversed");
	return linspace(zMin, zMax, steps);
}

} /* namespace */

int main(int argc, char **argv)
{
	CLI::App app{ "Focus measurement, defocus simulation and autofocus", "focuslab" };
	app.require_subcommand(1);
	app.fallthrough();

	GlobalOptions g;
	addGlobalOptions(app, g);

	std::function<void()> run;

	/* gen */
	auto *gen = app.add_subcommand("gen", "generate a step-edge or texture scene");
	std::string genKind;
	int width = 256, height = 256;
	std::optional<int> edgeX;
	int low = 0, high = 255;
	std::string genOut;
	gen->add_option("kind", genKind, "step or texture")
		->required()->check(CLI::IsMember({ "step", "texture" }));
	gen->add_option("--width", width, "image width")->check(CLI::PositiveNumber)->capture_default_str();
	gen->add_option("--height", height, "image height")->check(CLI::PositiveNumber)->capture_default_str();
	gen->add_option("--edge-x", edgeX, "first bright column (default width / 2)");
	gen->add_option("--low", low, "dark side level")->check(CLI::Range(0, 255))->capture_default_str();
	gen->add_option("--high", high, "bright side level")->check(CLI::Range(0, 255))->capture_default_str();
	gen->add_option("--out", genOut, "output PGM")->required();
	gen->callback([&] {
		run = [&] {
			Image image = genKind == "texture" ? make_texture(width, height, g.seed) : [&] {
				const int edge = edgeX.value_or(width / 2);
				if (edge < 0 || edge > width)
					throw FlagError("--edge-x", std::to_string(edge) + " outside [0, " +
									    std::to_string(width) + "]");
				return make_step_edge(width, height, edge, static_cast<std::uint8_t>(low),
						      static_cast<std::uint8_t>(high));
			}();
			save_pgm(image, genOut);
			std::cerr << "wrote " << genOut << "\n";
		};
	});

	/* blur */
	auto *blur = app.add_subcommand("blur", "capture a scene through the defocused lens");
	std::string blurIn, blurOut;
	double blurZ = 0.0;
	blur->add_option("--in", blurIn, "input PGM")->required();
	blur->add_option("--z", blurZ, "lens displacement (mm)")->required();
	blur->add_option("--out", blurOut, "output PGM")->required();
	blur->callback([&] {
		run = [&] {
			const Image scene = load_pgm(blurIn);
			const BlurRadius r = blur_radius(g.optics, { blurZ });
			std::cerr << "blur radius " << r.mm << " mm = " << r.px << " px\n";
			save_pgm(capture(scene, g.optics, { blurZ }, g.noise(0.0)), blurOut);
			std::cerr << "wrote " << blurOut << "\n";
		};
	});

	/* measure */
	auto *measure = app.add_subcommand("measure", "print the resolution function of a window");
	std::string measureIn;
	measure->add_option("--in", measureIn, "input PGM")->required();
	measure->callback([&] {
		run = [&] {
			const Image image = load_pgm(measureIn);
			std::cout << resolution(image, g.window(image), parse_metric_kind(g.metric)) << "\n";
		};
	});

	/* sweep */
	auto *sweepCmd = app.add_subcommand("sweep", "measure the focus curve over a z range");
	std::string sweepIn, sweepOut;
	double zMin = -2.0, zMax = 2.0;
	int zSteps = 21, trials = 1;
	sweepCmd->add_option("--in", sweepIn, "scene PGM")->required();
	sweepCmd->add_option("--z-min", zMin, "first z (mm)")->capture_default_str();
	sweepCmd->add_option("--z-max", zMax, "last z (mm)")->capture_default_str();
	sweepCmd->add_option("--z-steps", zSteps, "number of z values")->capture_default_str();
	sweepCmd->add_option("--trials", trials, "captures per z")->check(CLI::PositiveNumber)->capture_default_str();
	sweepCmd->add_option("--out", sweepOut, "output CSV (default stdout)");
	sweepCmd->callback([&] {
		run = [&] {
			const Image scene = load_pgm(sweepIn);
			const std::vector<double> zs = zRange(zMin, zMax, zSteps);
			const FocusCurve curve = sweep(scene, g.optics, g.window(scene),
						       parse_metric_kind(g.metric), zs, g.noise(0.0), trials);
			emit(sweepOut, [&](std::ostream &out) { write_csv(out, curve); });
		};
	});

	/* autofocus */
	auto *af = app.add_subcommand("autofocus", "search the lens position of maximum detail");
	std::string afIn, afTrace;
	SearchParams params;
	af->add_option("--in", afIn, "scene PGM")->required();
	af->add_option("--z-min", params.z_min, "search interval start (mm)")->capture_default_str();
	af->add_option("--z-max", params.z_max, "search interval end (mm)")->capture_default_str();
	af->add_option("--coarse-steps", params.coarse_steps, "coarse scan positions")
		->check(CLI::Range(5, 100000))->capture_default_str();
	af->add_option("--refine-iterations", params.refine_iterations, "golden-section iterations")
		->check(CLI::Range(0, 200))->capture_default_str();
	af->add_option("--trials", params.trials_per_eval, "captures averaged per probe")
		->check(CLI::PositiveNumber)->capture_default_str();
	af->add_option("--trace", afTrace, "write the search trace CSV here");
	af->callback([&] {
		run = [&] {
			const Image scene = load_pgm(afIn);
			params.metric = parse_metric_kind(g.metric);
			if (!(params.z_min < params.z_max))
				throw FlagError("--z-min/--z-max", "search interval needs --z-min < --z-max");
			const AutofocusResult r = autofocus(scene, g.optics, g.window(scene), g.noise(0.0), params);
			if (!afTrace.empty())
				emit(afTrace, [&](std::ostream &out) { write_trace_csv(out, r); });
			std::cout << "z_star_mm=" << csv::number(r.z_star) << "\n"
				  << "d_star=" << csv::number(r.d_star) << "\n"
				  << "evaluations=" << r.evaluations << "\n"
				  << "status=" << (r.at_boundary ? "boundary" : "ok") << "\n";
			if (r.at_boundary)
				std::cerr << "warning: best position is at the end of the search interval; "
					     "focus may lie outside it\n";
		};
	});

	/* stability */
	auto *stab = app.add_subcommand("stability", "metric repeatability versus window size");
	std::string stabIn, stabOut;
	std::vector<int> sizes(std::begin(kDefaultSizes), std::end(kDefaultSizes));
	int repeats = 10;
	double stabZ = 0.0;
	stab->add_option("--in", stabIn, "scene PGM")->required();
	stab->add_option("--sizes", sizes, "window sizes")->delimiter(',')->check(CLI::Range(2, 1024))
		->capture_default_str();
	stab->add_option("--repeats", repeats, "captures per size")->check(CLI::Range(3, 100000))
		->capture_default_str();
	stab->add_option("--z", stabZ, "lens displacement (mm)")->capture_default_str();
	stab->add_option("--out", stabOut, "output CSV (default stdout)");
	stab->callback([&] {
		run = [&] {
			const Image scene = load_pgm(stabIn);
			for (int n : sizes)
				g.window(scene, n);
			const WindowSpec centre = g.window(scene, sizes.front());
			const StabilityReport report =
				stability_study(scene, g.optics, { stabZ }, centre.center_x, centre.center_y,
						sizes, g.noise(2.0), repeats);
			for (const StabilityRow &row : report.rows)
				std::cerr << row.n << "x" << row.n << ": mean " << row.mean
					  << ", max |dispersion| " << row.max_abs_deviation_pct << "%\n";
			emit(stabOut, [&](std::ostream &out) { write_csv(out, report); });
		};
	});

	/* compare */
	auto *cmp = app.add_subcommand("compare", "time both metrics and compare their best z");
	std::string cmpIn, cmpOut;
	double cmpZMin = -2.0, cmpZMax = 2.0;
	int cmpSteps = 21, cmpRepeats = 1000;
	std::vector<int> cmpSizes(std::begin(kDefaultSizes), std::end(kDefaultSizes));
	cmp->add_option("--in", cmpIn, "scene PGM")->required();
	cmp->add_option("--z-min", cmpZMin, "first z (mm)")->capture_default_str();
	cmp->add_option("--z-max", cmpZMax, "last z (mm)")->capture_default_str();
	cmp->add_option("--z-steps", cmpSteps, "number of z values")->capture_default_str();
	cmp->add_option("--repeats", cmpRepeats, "timed evaluations per (metric, size)")
		->check(CLI::Range(10, 100000000))->capture_default_str();
	cmp->add_option("--sizes", cmpSizes, "window sizes")->delimiter(',')->check(CLI::Range(2, 1024))
		->capture_default_str();
	cmp->add_option("--out", cmpOut, "output CSV (default stdout)");
	cmp->callback([&] {
		run = [&] {
			const Image scene = load_pgm(cmpIn);
			const std::vector<double> zs = zRange(cmpZMin, cmpZMax, cmpSteps);
			for (int n : cmpSizes)
				g.window(scene, n);
			const MetricBenchReport report =
				compare_metrics(scene, g.optics, g.window(scene), zs, cmpRepeats, cmpSizes);
			emit(cmpOut, [&](std::ostream &out) { write_csv(out, report); });
		};
	});

	try {
		app.parse(argc, argv);
		g.validate();
		g.optics.validate();
		run();
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		std::cerr << "focuslab: error: " << e.what() << "\n";
		return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
	} catch (const FlagError &e) {
		std::cerr << "focuslab: error: " << e.what() << "\n";
		return 2;
	} catch (const std::exception &e) {
		std::cerr << "focuslab: error: " << e.what() << "\n";
		return 1;
	}
	return 0;
}
