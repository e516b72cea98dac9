#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "orcgrid/milp/model.hpp"

namespace orcgrid::milp {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(int line, std::string section, const std::string& message);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] const std::string& section() const { return section_; }

 private:
  int line_;
  std::string section_;
};

/// Free-format MPS. Binaries are wrapped in INTORG/INTEND marker pairs and
/// carry explicit bounds; numbers use 17 significant digits.
[[nodiscard]] std::string write_mps(const MilpModel& model);

[[nodiscard]] MilpModel read_mps(std::string_view text);

}  // namespace orcgrid::milp
