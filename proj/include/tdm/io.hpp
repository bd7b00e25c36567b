#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tdm::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// One compact JSON value per line, each terminated by '\n'.
std::string to_jsonl(const std::vector<Json>& records);

/// Calls `on_record` for each non-blank line. Parse errors name the line number.
void for_each_jsonl(std::string_view contents, const std::string& source_name,
                    const std::function<void(Json&&)>& on_record);

std::vector<Json> read_jsonl(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);

/// Compact dump with invalid UTF-8 replaced, so arbitrary text never aborts a write.
std::string dump(const Json& value, int indent = -1);

}  // namespace tdm::io
