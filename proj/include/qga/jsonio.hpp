#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qga {

// Doubles in output files are rendered with 17 significant digits so that
// every value round-trips exactly and repeated runs are byte-identical.
std::string format_double(double v);

// JSON string escaping for the hand-rolled record writers.
std::string json_escape(const std::string& s);

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a_hex(const std::uint8_t* data, std::size_t len);
std::string fnv1a_hex(const std::string& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qga
