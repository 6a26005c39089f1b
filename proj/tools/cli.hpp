#pragma once

#include <string>
#include <vector>

namespace shapedc::cli {

/// Runs the shape_dc command line. `args` excludes the program name.
/// Returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace shapedc::cli
