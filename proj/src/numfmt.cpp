#include "ncflow/numfmt.hpp"

#include <array>
#include <charconv>

namespace ncflow {

void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

std::string format_number(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

}  // namespace ncflow
