#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace rqcm::cli {

/// 17 significant digits; round-trips every double.
std::string fmt17(double v);

/// "4..30", "4..30:2", "4,6,8" or a mix such as "2,4..8".
std::vector<int> parse_int_list(const std::string& text);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// {"command", "version", "seed", "parameters"} block shared by every command.
nlohmann::ordered_json provenance(const std::string& command, const nlohmann::ordered_json& parameters,
                                  unsigned long long seed);

/// Writes `doc` to `path`, or to stdout when path is empty or "-".
void emit_json(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace rqcm::cli
