#include "p2b/records.hpp"

#include <cctype>
#include <fstream>

namespace p2b {

std::string to_string(Strategy s) {
    return s == Strategy::Direct ? "direct" : "retrieval_dox";
}

std::string platform_slug(const std::string& platform_name) {
    std::string slug;
    for (unsigned char c : platform_name) {
        if (std::isalnum(c)) {
            slug += static_cast<char>(std::tolower(c));
        } else {
            slug += '_';
        }
    }
    return slug;
}

std::string record_filename(const std::string& platform_name, Strategy s) {
    return platform_slug(platform_name) + "_" + to_string(s) + ".json";
}

void write_record(const nlohmann::json& record, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingFile("cannot write " + path.string());
    out << record.dump(2) << '\n';
}

nlohmann::json load_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedManifest(path.string() + ": " + e.what());
    }
}

}  // namespace p2b
