#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "routepe/types.hpp"

namespace routepe {

// A solved instance as stored on disk. Solution files embed a copy of their
// instance so downstream stages (encode, probe, stats) are self-contained.
struct SolutionRecord {
    Instance instance;
    Solution solution;
    CostBreakdown cost;
    std::uint64_t reward_trace_len = 0;
    std::string meta_json;  // solver config echo
};

// Instance <-> JSON text ("schema": 1). Round-trips losslessly, including the
// generator echo under "meta".
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string solution_to_json(const SolutionRecord& rec);
SolutionRecord solution_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Sorted listing of regular files in `dir` whose name ends with `suffix`.
// Directory iteration order is unspecified, so callers rely on this for
// deterministic batch processing.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, const std::string& suffix);

}  // namespace routepe
