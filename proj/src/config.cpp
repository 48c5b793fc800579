#include "nlsbox/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlsbox {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

IniMap IniMap::parse_string(const std::string& text) {
    IniMap ini;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos)
                throw std::runtime_error("config: unterminated section header: " + line);
            section = trim(line.substr(1, close - 1));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        ini.kv_[section + "/" + key] = val;
    }
    return ini;
}

IniMap IniMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool IniMap::has(const std::string& section, const std::string& key) const {
    return kv_.count(section + "/" + key) > 0;
}

std::string IniMap::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const auto it = kv_.find(section + "/" + key);
    return it == kv_.end() ? fallback : it->second;
}

double IniMap::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    return std::stod(get(section, key));
}

double IniMap::require_double(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw std::runtime_error("config: missing required key " + section + "/" + key);
    return std::stod(get(section, key));
}

int IniMap::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    return std::stoi(get(section, key));
}

std::vector<double> IniMap::get_list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    std::istringstream ss(get(section, key));
    double v;
    while (ss >> v) out.push_back(v);
    return out;
}

std::vector<int> IniMap::get_int_list(const std::string& section, const std::string& key) const {
    std::vector<int> out;
    std::istringstream ss(get(section, key));
    int v;
    while (ss >> v) out.push_back(v);
    return out;
}

} // namespace nlsbox
