#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace koszulscope {

/// One output row. The JSON keys are exactly these six field names.
struct Record {
  std::string surface;
  std::optional<long> d;
  std::string quantity;
  std::string value;
  std::string status;
  std::string provenance;

  friend bool operator==(const Record&, const Record&) = default;
};

enum class OutputFormat { Json, Csv, Markdown };

std::string render(const std::vector<Record>& records, OutputFormat format);

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the koszulscope executable; args excludes argv[0].
/// Records go to out, diagnostics and traces to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace koszulscope
