#pragma once

#include <cstdint>
#include <string>

namespace focuslab::csv {

/*
 * Locale-independent shortest round-trip representation, so CSV output is
 * byte-stable and parses back to the identical double.
 */
std::string number(double value);
std::string number(std::int64_t value);
std::string number(std::uint64_t value);
inline std::string number(int value) { return number(static_cast<std::int64_t>(value)); }

} /* namespace focuslab::csv */
