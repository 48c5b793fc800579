#ifndef NLSBOX_CONFIG_HPP
#define NLSBOX_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace nlsbox {

/// Declarative "[section] key = value" text configuration; '#' starts a comment.
class IniMap {
public:
    static IniMap parse_file(const std::string& path);
    static IniMap parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    double require_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key) const;

private:
    std::map<std::string, std::string> kv_; // "section/key" -> value
};

} // namespace nlsbox

#endif
