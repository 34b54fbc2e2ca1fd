#pragma once

#include <string>

namespace ncflow {

/// Shortest decimal that parses back to exactly `v`.
std::string format_number(double v);
void append_number(std::string& out, double v);

}  // namespace ncflow
