/*
 * Binary PGM (P5) reader and writer, 8-bit only (maxval 255).
 */

#include "focuslab/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

namespace focuslab {

namespace {

using Kind = PgmError::Kind;

class HeaderParser
{
public:
	HeaderParser(const std::vector<char> &data, const std::string &name)
		: data_(data), name_(name)
	{
	}

	/* Whitespace and '#' comments may precede every header field. */
	void skipSeparators()
	{
		while (pos_ < data_.size()) {
			const unsigned char c = data_[pos_];
			if (std::isspace(c)) {
				pos_++;
			} else if (c == '#') {
				while (pos_ < data_.size() && data_[pos_] != '\n')
					pos_++;
			} else {
				break;
			}
		}
	}

	long readNumber(const char *field)
	{
		skipSeparators();
		long value = 0;
		std::size_t digits = 0;
		while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
			value = value * 10 + (data_[pos_] - '0');
			if (value > 1L << 30)
				fail(std::string(field) + " too large");
			pos_++;
			digits++;
		}
		if (digits == 0)
			fail(std::string("missing ") + field);
		return value;
	}

	/* Exactly one whitespace byte separates maxval from the raster. */
	void endHeader()
	{
		if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
			fail("no whitespace after maxval");
		pos_++;
	}

	std::size_t position() const { return pos_; }

	[[noreturn]] void fail(const std::string &why) const
	{
		throw PgmError(Kind::MalformedHeader, name_ + ": malformed PGM header: " + why);
	}

private:
	const std::vector<char> &data_;
	const std::string &name_;
	std::size_t pos_ = 2;
};

} /* namespace */

Image load_pgm(const std::filesystem::path &path)
{
	const std::string name = path.string();
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw PgmError(Kind::Missing, name + ": cannot open file");

	const std::vector<char> data{ std::istreambuf_iterator<char>(in),
				      std::istreambuf_iterator<char>() };

	if (data.size() < 2 || data[0] != 'P')
		throw PgmError(Kind::MalformedHeader, name + ": malformed PGM header: bad magic");
	if (data[1] != '5')
		throw PgmError(Kind::UnsupportedVariant,
			       name + ": unsupported PGM variant P" + std::string(1, data[1]));

	HeaderParser header(data, name);
	const long width = header.readNumber("width");
	const long height = header.readNumber("height");
	const long maxval = header.readNumber("maxval");
	if (width < 1 || height < 1)
		header.fail("zero dimension");
	if (maxval != 255)
		throw PgmError(Kind::UnsupportedMaxval,
			       name + ": unsupported maxval " + std::to_string(maxval) + " (only 255)");
	header.endHeader();

	const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
	const std::size_t offset = header.position();
	if (data.size() - offset < count)
		throw PgmError(Kind::Truncated,
			       name + ": truncated pixel data (" + std::to_string(data.size() - offset) +
				       " of " + std::to_string(count) + " bytes)");

	std::vector<std::uint8_t> samples(count);
	for (std::size_t i = 0; i < count; i++)
		samples[i] = static_cast<std::uint8_t>(data[offset + i]);
	return { static_cast<int>(width), static_cast<int>(height), std::move(samples) };
}

void save_pgm(const Image &image, const std::filesystem::path &path)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out)
		throw PgmError(Kind::Io, path.string() + ": cannot open for writing");

	out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
	auto samples = image.samples();
	out.write(reinterpret_cast<const char *>(samples.data()),
		  static_cast<std::streamsize>(samples.size()));
	out.flush();
	if (!out)
		throw PgmError(Kind::Io, path.string() + ": write failed");
}

} /* namespace focuslab */
