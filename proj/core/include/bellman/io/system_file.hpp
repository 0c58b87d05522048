#pragma once

// JSON system files. Numbers in the exact engine are fraction strings ("1/6")
// or JSON integers; floating-point literals are rejected.
//
// {
//   "format": "bellman-system/1",
//   "outcomes": ["w0", "w1"],
//   "horizon": 1,
//   "controls": [{"id": "c", "measure": ["1/2", "1/2"], "payoff": [0, 1],
//                 "filtration": [[[0, 1]], [[0], [1]]],       or "natural"
//                 "observed": [[0, 0], [0, 1]]}],             optional, one row per outcome
//   "times": [{"id": "1", "value": 1},                         same for every control
//             {"id": "S", "per_control": {"c": [1, "inf"]}}],
//   "classes": {"1": [["c"]],                                  a partition
//               "S": {"c": ["c"]},                             or D(c,S) per control
//               "0": "prefix"}                                 or derived from observed processes
//                                                              ("derive: prefix" is accepted too)
// }

#include "bellman/control_system.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

namespace bellman::io {

/// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset);

/// Throws ParseError with line and column for syntax errors, float literals
/// and bad fraction strings; ParseError without a location for structural
/// problems (the message names the offending member).
control::FiniteControlSystem parse_system(std::string_view text);

std::string read_file(const std::filesystem::path& path);

control::FiniteControlSystem load_system(const std::filesystem::path& path);

/// Serializes sys so that parse_system reproduces it: filtrations as atom
/// lists, every time per control, every class per control.
std::string write_system(const control::FiniteControlSystem& sys);

}  // namespace bellman::io
