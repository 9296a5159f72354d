#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semtensor::text {

// Splits on a single delimiter character; keeps empty fields.
std::vector<std::string_view> Split(std::string_view s, char delim);

std::string_view Trim(std::string_view s);
std::string Lowercase(std::string_view s);

// Backslash escaping of tab, newline, carriage return, space and backslash so
// that a label is always a single whitespace-free field.
std::string EscapeLabel(std::string_view label);
std::string UnescapeLabel(std::string_view escaped);

// Shortest decimal representation that parses back to the identical double.
std::string FormatDouble(double value);
std::string FormatFixed(double value, int digits);

// Strict parsers: after trimming surrounding whitespace the whole field must
// be consumed.
bool ParseDouble(std::string_view s, double* out);
bool ParseInt(std::string_view s, std::int64_t* out);
bool ParseBool(std::string_view s, bool* out);

std::uint64_t Fnv1a64(std::string_view bytes);
std::string Hex64(std::uint64_t value);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace semtensor::text
