#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "focuslab/image.hpp"
#include "focuslab/metric.hpp"

namespace fs = std::filesystem;
using namespace focuslab;

namespace {

struct Run {
	int status;
	std::string out;
	std::string err;
};

class Sandbox
{
public:
	Sandbox()
	{
		static int counter = 0;
		dir_ = fs::temp_directory_path() /
		       ("focuslab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
		fs::create_directories(dir_);
	}
	~Sandbox() { fs::remove_all(dir_); }

	std::string path(const std::string &name) const { return (dir_ / name).string(); }

	Run run(const std::string &args) const
	{
		const std::string cmd = std::string(FOCUSLAB_CLI) + " " + args + " >" + path("stdout") +
					" 2>" + path("stderr");
		const int raw = std::system(cmd.c_str());
		return { WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(path("stdout")), slurp(path("stderr")) };
	}

	static std::string slurp(const std::string &p)
	{
		std::ifstream in(p, std::ios::binary);
		return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
	}

private:
	fs::path dir_;
};

std::vector<std::vector<std::string>> parseCsv(const std::string &text)
{
	std::vector<std::vector<std::string>> rows;
	std::istringstream in(text);
	std::string line;
	while (std::getline(in, line)) {
		std::vector<std::string> cells;
		std::istringstream ls(line);
		std::string cell;
		while (std::getline(ls, cell, ','))
			cells.push_back(cell);
		rows.push_back(cells);
	}
	return rows;
}

std::map<std::string, std::string> parseKeyValues(const std::string &text)
{
	std::map<std::string, std::string> kv;
	std::istringstream in(text);
	std::string line;
	while (std::getline(in, line)) {
		const auto eq = line.find('=');
		if (eq != std::string::npos)
			kv[line.substr(0, eq)] = line.substr(eq + 1);
	}
	return kv;
}

} /* namespace */

TEST_CASE("gen")
{
	Sandbox s;
	REQUIRE(s.run("gen step --width 64 --height 64 --edge-x 32 --out " + s.path("step.pgm")).status == 0);
	const Image step = load_pgm(s.path("step.pgm"));
	CHECK(step == make_step_edge(64, 64, 32, 0, 255));
	CHECK(step.at(31, 10) == 0);
	CHECK(step.at(32, 10) == 255);

	REQUIRE(s.run("gen texture --seed 7 --out " + s.path("t1.pgm")).status == 0);
	REQUIRE(s.run("gen texture --seed 7 --out " + s.path("t2.pgm")).status == 0);
	CHECK(Sandbox::slurp(s.path("t1.pgm")) == Sandbox::slurp(s.path("t2.pgm")));
	CHECK(load_pgm(s.path("t1.pgm")) == make_texture(256, 256, 7));

	const Run bad = s.run("gen step --width 64 --edge-x 99 --out " + s.path("bad.pgm"));
	CHECK(bad.status != 0);
	CHECK(bad.err.find("--edge-x") != std::string::npos);
	CHECK_FALSE(fs::exists(s.path("bad.pgm")));

	CHECK(s.run("gen blob --out " + s.path("x.pgm")).status != 0);
	CHECK(s.run("gen step").status != 0);
}

TEST_CASE("blur")
{
	Sandbox s;
	REQUIRE(s.run("gen texture --width 128 --height 128 --seed 3 --out " + s.path("in.pgm")).status == 0);

	REQUIRE(s.run("blur --in " + s.path("in.pgm") + " --z 0 --out " + s.path("z0.pgm")).status == 0);
	CHECK(Sandbox::slurp(s.path("z0.pgm")) == Sandbox::slurp(s.path("in.pgm")));

	REQUIRE(s.run("blur --in " + s.path("in.pgm") + " --z 2 --out " + s.path("z2.pgm")).status == 0);
	const WindowSpec w{ 63, 63, 31 };
	CHECK(resolution(load_pgm(s.path("z2.pgm")), w, MetricKind::Squared) <
	      resolution(load_pgm(s.path("in.pgm")), w, MetricKind::Squared));

	/* radius 190 px does not fit a 128 image */
	CHECK(s.run("blur --in " + s.path("in.pgm") + " --z 10 --out " + s.path("z10.pgm")).status != 0);
	CHECK(s.run("blur --in " + s.path("missing.pgm") + " --z 0 --out " + s.path("m.pgm")).status != 0);
}

TEST_CASE("measure")
{
	Sandbox s;
	save_pgm(Image(16, 16, std::uint8_t{ 90 }), s.path("flat.pgm"));
	Run r = s.run("measure --in " + s.path("flat.pgm") + " --n 15");
	CHECK(r.status == 0);
	CHECK(r.out == "0\n");

	save_pgm(Image(3, 3, std::vector<std::uint8_t>{ 0, 0, 255, 0, 0, 255, 0, 0, 255 }), s.path("edge.pgm"));
	r = s.run("measure --in " + s.path("edge.pgm") + " --n 3");
	CHECK(r.status == 0);
	CHECK(r.out == "260100\n");
	r = s.run("measure --in " + s.path("edge.pgm") + " --n 3 --metric absolute");
	CHECK(r.out == "1020\n");

	r = s.run("measure --in " + s.path("edge.pgm") + " --n 5");
	CHECK(r.status != 0);
	CHECK(r.err.rfind("focuslab: error:", 0) == 0);
	CHECK(s.run("measure --in " + s.path("edge.pgm") + " --n 3 --metric cubic").status != 0);
}

TEST_CASE("sweep")
{
	Sandbox s;
	REQUIRE(s.run("gen texture --width 128 --height 128 --out " + s.path("in.pgm")).status == 0);
	const Run r = s.run("sweep --in " + s.path("in.pgm") + " --z-min -1 --z-max 1 --z-steps 11");
	REQUIRE(r.status == 0);
	const auto rows = parseCsv(r.out);
	REQUIRE(rows.size() == 12);
	CHECK(rows[0] == std::vector<std::string>{ "z_mm", "d_mean", "d_stddev", "n_trials" });
	for (std::size_t i = 1; i <= 11; i++) {
		CHECK(rows[i].size() == 4);
		CHECK(rows[i][1] == rows[12 - i][1]);
		CHECK(std::stod(rows[i][1]) <= std::stod(rows[6][1]));
	}
	CHECK(rows[6][0] == "0");

	CHECK(s.run("sweep --in " + s.path("in.pgm") + " --z-min 1 --z-max -1").status != 0);
	CHECK(s.run("sweep --in " + s.path("in.pgm") + " --z-steps 0").status != 0);

	REQUIRE(s.run("sweep --in " + s.path("in.pgm") + " --sigma 2 --trials 3 --z-steps 5 --out " +
		      s.path("a.csv")).status == 0);
	REQUIRE(s.run("sweep --in " + s.path("in.pgm") + " --sigma 2 --trials 3 --z-steps 5 --out " +
		      s.path("b.csv")).status == 0);
	CHECK(Sandbox::slurp(s.path("a.csv")) == Sandbox::slurp(s.path("b.csv")));
}

TEST_CASE("autofocus")
{
	Sandbox s;
	REQUIRE(s.run("gen texture --out " + s.path("in.pgm")).status == 0);

	Run r = s.run("autofocus --in " + s.path("in.pgm") + " --trace " + s.path("trace.csv"));
	REQUIRE(r.status == 0);
	auto kv = parseKeyValues(r.out);
	CHECK(std::abs(std::stod(kv["z_star_mm"])) <= 0.02);
	CHECK(kv["status"] == "ok");
	const int evaluations = std::stoi(kv["evaluations"]);
	CHECK(evaluations <= 40);
	const auto trace = parseCsv(Sandbox::slurp(s.path("trace.csv")));
	CHECK(trace[0] == std::vector<std::string>{ "step", "z_mm", "d_mean", "phase" });
	CHECK(static_cast<int>(trace.size()) - 1 == evaluations);

	r = s.run("autofocus --in " + s.path("in.pgm") + " --z-min 1 --z-max 5");
	CHECK(r.status == 0);
	kv = parseKeyValues(r.out);
	CHECK(kv["status"] == "boundary");
	CHECK(kv["z_star_mm"] == "1");
	CHECK(r.err.find("warning") != std::string::npos);

	CHECK(s.run("autofocus --in " + s.path("in.pgm") + " --coarse-steps 3").status != 0);
}

TEST_CASE("stability")
{
	Sandbox s;
	REQUIRE(s.run("gen texture --out " + s.path("in.pgm")).status == 0);

	Run r = s.run("stability --in " + s.path("in.pgm") + " --sigma 0");
	REQUIRE(r.status == 0);
	auto rows = parseCsv(r.out);
	CHECK(rows[0] == std::vector<std::string>{ "n", "measurement_index", "d", "mean", "deviation_pct" });
	CHECK(rows.size() == 1 + 4 * 10);
	for (std::size_t i = 1; i < rows.size(); i++)
		CHECK(rows[i][4] == "0");

	r = s.run("stability --in " + s.path("in.pgm"));
	REQUIRE(r.status == 0);
	rows = parseCsv(r.out);
	std::map<int, double> worst;
	for (std::size_t i = 1; i < rows.size(); i++) {
		const int n = std::stoi(rows[i][0]);
		worst[n] = std::max(worst[n], std::abs(std::stod(rows[i][4])));
	}
	REQUIRE(worst.size() == 4);
	CHECK(worst[5] > worst[9]);
	CHECK(worst[9] > worst[17]);
	CHECK(worst[17] > worst[31]);

	CHECK(s.run("stability --in " + s.path("in.pgm") + " --repeats 2").status != 0);
}

TEST_CASE("compare")
{
	Sandbox s;
	REQUIRE(s.run("gen texture --width 128 --height 128 --out " + s.path("in.pgm")).status == 0);
	const Run r = s.run("compare --in " + s.path("in.pgm") + " --repeats 50 --z-min -1 --z-max 1 --z-steps 9");
	REQUIRE(r.status == 0);
	const auto rows = parseCsv(r.out);
	CHECK(rows[0] == std::vector<std::string>{ "kind", "n", "mean_ns_per_eval", "argmax_z_mm" });
	REQUIRE(rows.size() == 9);
	for (std::size_t i = 1; i < rows.size(); i++)
		CHECK(rows[i][3] == rows[1][3]);
	CHECK(rows[1][3] == "0");
}
