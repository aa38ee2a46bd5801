#pragma once

#include <cstdint>
#include <string>

namespace iltlab {

// shortest round-trip decimal form
std::string format_double(double v);

// write to a sibling temp file then rename over the target
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

}
