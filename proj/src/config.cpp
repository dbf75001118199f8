#include "hedgelab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hedgelab/util.hpp"

namespace hedgelab {

std::string RunConfig::get(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
}

long RunConfig::get_long(const std::string& key, long def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : parse_long(it->second);
}

double RunConfig::get_double(const std::string& key, double def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : parse_double(it->second);
}

bool RunConfig::get_bool(const std::string& key, bool def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key = value");
        auto key = trim(s.substr(0, eq));
        auto val = trim(s.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + " has empty key");
        cfg.kv[std::string(key)] = std::string(val);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    return parse_config_text(read_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hedgelab
