#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdl/flow.hpp"

namespace sdl {

/// Flat key=value file: one pair per line, '#' starts a comment, blank lines
/// ignored.  Throws config_error on unreadable files or malformed lines.
std::map<std::string, std::string> read_kv_file(const std::string& path);

/// Throws config_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

/// Flow trajectory as CSV with columns step,E,F,total,H,residual_norm,dt.
std::string trajectory_csv(const std::vector<FlowStep>& steps);

} // namespace sdl
