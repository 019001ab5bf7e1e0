#include "focuslab/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace focuslab::csv {

namespace {

template<typename T>
std::string format(T value)
{
	char buf[64];
	auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
	if (ec != std::errc())
		throw std::runtime_error("number formatting failed");
	return { buf, end };
}

} /* namespace */

std::string number(double value)
{
	/* Avoid "-0" for values that are zero. */
	if (value == 0.0)
		value = 0.0;
	return format(value);
}

std::string number(std::int64_t value) { return format(value); }
std::string number(std::uint64_t value) { return format(value); }

} /* namespace focuslab::csv */
