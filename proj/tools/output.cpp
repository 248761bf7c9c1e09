#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rqcm/errors.hpp"

#ifndef RQCM_VERSION
#define RQCM_VERSION "0.0.0"
#endif

namespace rqcm::cli {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    std::string hi_text = item.substr(dots + 2);
    int step = 1;
    if (const auto colon = hi_text.find(':'); colon != std::string::npos) {
      step = to_int(hi_text.substr(colon + 1));
      hi_text = hi_text.substr(0, colon);
    }
    const int lo = to_int(item.substr(0, dots));
    const int hi = to_int(hi_text);
    if (step <= 0 || hi < lo) throw InvalidArgument("bad range '" + item + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty integer list '" + text + "'");
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

nlohmann::ordered_json provenance(const std::string& command, const nlohmann::ordered_json& parameters,
                                  unsigned long long seed) {
  nlohmann::ordered_json p;
  p["command"] = command;
  p["version"] = RQCM_VERSION;
  p["seed"] = seed;
  p["parameters"] = parameters;
  return p;
}

void emit_json(const nlohmann::ordered_json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

}  // namespace rqcm::cli
