#pragma once

#include <string>

namespace nodal {

// Write through a sibling temp file and rename, so readers never see a partial file.
void atomic_write(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace nodal
