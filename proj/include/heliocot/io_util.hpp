#pragma once

#include <filesystem>
#include <string>

namespace heliocot {

// Reads a whole file; throws IoError with the path in the message.
std::string read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory, then renames into place,
// so downstream stages never observe a half-written file.
void atomic_write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace heliocot
