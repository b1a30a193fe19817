#pragma once

#include "mongeampere/app/app.hpp"
#include "mongeampere/types.hpp"

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace ma::app::detail {

using nlohmann::json;

/// Writes files into one directory and remembers their names.
class Artifacts {
 public:
  explicit Artifacts(std::string dir);
  void write(const std::string& name, const std::string& content);
  const std::string& dir() const noexcept { return dir_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::string dir_;
  std::vector<std::string> names_;
};

/// Named assertions collected during a run.
class Checks {
 public:
  void add(const std::string& name, bool pass, const std::string& detail);
  void note(const std::string& line) { lines_.push_back(line); }
  bool all_pass() const noexcept { return failures_ == 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::string>& lines() const noexcept { return lines_; }
  json to_json() const { return entries_; }

 private:
  json entries_ = json::array();
  std::vector<std::string> lines_;
  int failures_ = 0;
};

/// Text of a config given as a path or "preset:<name>"; base_dir receives
/// the directory relative file references resolve against.
std::string load_config(const std::string& spec, std::string* base_dir);
json parse_json(const std::string& text, const std::string& where);
void require_schema(const json& j, const std::string& expected);

std::string num(double v);

/// Summary document shared by every command.
json summary(const std::string& command, const std::string& name, int exit_code, const Checks& checks);

RunResult finish(RunResult r, const Checks& checks, Artifacts& out, const std::string& command,
                 const std::string& name);

}  // namespace ma::app::detail
