#pragma once

#include <string>

namespace hopfheat {

// Write to a sibling temp file and rename over `path`, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hopfheat
