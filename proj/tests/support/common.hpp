#ifndef CPMX_TESTS_COMMON_HPP
#define CPMX_TESTS_COMMON_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "cpmx/io.hpp"
#include "cpmx/model.hpp"

namespace cpmx::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string fixture_path(const std::string& name) {
    return std::string(CPMX_FIXTURE_DIR) + "/" + name;
}

inline Model load_fixture(const std::string& name) {
    return load_model(read_file(fixture_path(name)));
}

inline nlohmann::json load_fixture_json(const std::string& name) {
    return nlohmann::json::parse(read_file(fixture_path(name)));
}

// Minimal DOT structure check: one digraph block, every statement is either
// an attribute assignment, a quoted node with an optional attribute list, or
// a quoted edge.
inline bool looks_like_dot(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    bool saw_header = false, saw_footer = false;
    auto quoted = [](const std::string& s, std::size_t& pos) {
        if (pos >= s.size() || s[pos] != '"') return false;
        ++pos;
        while (pos < s.size() && s[pos] != '"') {
            if (s[pos] == '\\') ++pos;
            ++pos;
        }
        if (pos >= s.size()) return false;
        ++pos;
        return true;
    };
    while (std::getline(stream, line)) {
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        std::string body = line.substr(begin);
        if (!saw_header) {
            if (body.rfind("digraph ", 0) != 0 || body.back() != '{') return false;
            saw_header = true;
            continue;
        }
        if (body == "}") {
            saw_footer = true;
            continue;
        }
        if (saw_footer) return false;
        if (body.back() != ';') return false;
        body.pop_back();
        if (body.find('=') != std::string::npos && body.front() != '"') continue; // rankdir etc.
        std::size_t pos = 0;
        if (!quoted(body, pos)) return false;
        while (pos < body.size() && body[pos] == ' ') ++pos;
        if (pos + 1 < body.size() && body[pos] == '-' && body[pos + 1] == '>') {
            pos += 2;
            while (pos < body.size() && body[pos] == ' ') ++pos;
            if (!quoted(body, pos)) return false;
        }
        while (pos < body.size() && body[pos] == ' ') ++pos;
        if (pos < body.size()) {
            if (body[pos] != '[' || body.back() != ']') return false;
        }
    }
    return saw_header && saw_footer;
}

} // namespace cpmx::testing

#endif
