#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "p2b/errors.hpp"

namespace p2b {

enum class Strategy { Direct, RetrievalDox };

std::string to_string(Strategy s);  // "direct" / "retrieval_dox"

// Lowercased platform name with non-alphanumerics collapsed to '_'.
std::string platform_slug(const std::string& platform_name);

std::string record_filename(const std::string& platform_name, Strategy s);

// Canonical serialization: sorted keys (nlohmann's default object order),
// 2-space indent, trailing newline. Byte-stable for identical content, which
// the determinism guarantee of mock runs rides on.
void write_record(const nlohmann::json& record, const std::filesystem::path& path);

nlohmann::json load_record(const std::filesystem::path& path);

}  // namespace p2b
