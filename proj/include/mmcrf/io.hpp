#ifndef MMCRF_IO_HPP
#define MMCRF_IO_HPP

#include <string>
#include <string_view>

namespace mmcrf::io {

// Reads a whole file; throws IoError naming the path on failure.
std::string read_file(const std::string& path);

// Writes to a temporary sibling and renames into place, so a failed
// write never leaves a partial file behind.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace mmcrf::io

#endif  // MMCRF_IO_HPP
