#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/sweeps.hpp"

namespace orcgrid::io {

inline constexpr int kSchemaVersion = 1;

/// Schema, CSV or I/O problem in an input document. `where` is a JSON
/// pointer, or "file:line" for CSV sidecars.
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        where_(std::move(where)) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct ScenarioDocument {
  int version = kSchemaVersion;
  std::optional<std::string> currency_label;
  std::vector<MicrogridScenario> prosumers;
  std::optional<TradeNetwork> network;
};

/// Parses and validates a document. Relative CSV paths resolve against
/// `base_dir`. Throws InputError or ValidationError.
[[nodiscard]] ScenarioDocument parse_scenario(std::string_view json_text,
                                              const std::filesystem::path& base_dir);
[[nodiscard]] ScenarioDocument load_scenario(const std::filesystem::path& path);

/// Canonical form: every series inline, fluids and matrices spelled out,
/// keys sorted, f_max infinity as null.
[[nodiscard]] std::string write_scenario(const ScenarioDocument& doc);

/// Hex SHA-256 of the canonical form.
[[nodiscard]] std::string input_digest(const ScenarioDocument& doc);
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

struct SweepDocument {
  ScenarioDocument source;
  sweeps::SweepSpec spec;
};

/// Sweep files name a scenario document (path or inline object) holding
/// exactly one prosumer, an axis and optional values and outputs.
[[nodiscard]] SweepDocument parse_sweep(std::string_view json_text,
                                        const std::filesystem::path& base_dir);
[[nodiscard]] SweepDocument load_sweep(const std::filesystem::path& path);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace orcgrid::io
