#pragma once

#include <string>
#include <vector>

#include "ugen/mpoly.hpp"
#include "ugen/point.hpp"

namespace ugen {

/// System file: {"variables": [names], "groups": [[indices]], "equations":
/// [text grammar], optional "homogenizing": [index or -1 per group]}.
void write_system_json(const PolySystem& F, const std::string& path);
PolySystem read_system_json(const std::string& path);

std::string system_to_json(const PolySystem& F);
PolySystem system_from_json(const std::string& text);

/// Solution file: a JSON array; each entry {"status": name, "point":
/// [[[re,im], ...] per factor]}.
struct SolutionEntry {
  std::string status = "Success";
  MultiProjPoint point;
};

void write_solutions_json(const std::vector<SolutionEntry>& sols,
                          const std::string& path);
std::vector<SolutionEntry> read_solutions_json(const std::string& path);

std::string solutions_to_json(const std::vector<SolutionEntry>& sols);
std::vector<SolutionEntry> solutions_from_json(const std::string& text);

/// Writes via a temporary file in the same directory and renames into place.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

}  // namespace ugen
