// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tg/error.hh"

namespace tg::cli {

inline constexpr const char* kToolName = "topicgrouper";
inline constexpr const char* kToolVersion = "1.0.0";

// Provenance attached to every artifact. No timestamps, so reruns with the
// same inputs produce identical files.
struct RunMeta {
  std::string command_line;
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json json() const {
    return {{"tool", kToolName},
            {"version", kToolVersion},
            {"command_line", command_line},
            {"seeds", seeds},
            {"params", params}};
  }
  // Single comment line for CSV and text outputs.
  std::string comment() const { return "# " + json().dump() + "\n"; }
};

// Writes through a sibling temporary file and renames it into place, so a
// failed command never leaves a partial artifact behind.
inline void write_atomic(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& produce) {
  auto tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw io_error("cannot write " + path.string());
      produce(out);
      out.flush();
      if (!out) throw io_error("write failed for " + path.string());
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_atomic(path, [&](std::ostream& out) { out << text; });
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

// "1,2,5" or "1-4" or a mix.
inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw invalid_argument("empty range '" + item + "'");
        for (int k = lo; k <= hi; ++k) out.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw invalid_argument("not an integer list: '" + s + "'");
    }
  }
  if (out.empty()) throw invalid_argument("empty integer list");
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw invalid_argument("not a number list: '" + s + "'");
    }
  }
  return out;
}

}  // namespace tg::cli
