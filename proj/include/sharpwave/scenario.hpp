#pragma once

#include <map>
#include <string>
#include <vector>

namespace sharpwave {

// Sectioned key = value text. Sections: [kinetics], [wave], [solver],
// [speed], [phase], [variational], [pde], [sweep], [output]. Lines starting
// with # or ; are comments; inline trailing comments are stripped.
struct scenario {
    std::string path;
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has_section(const std::string& sec) const;
    bool has(const std::string& sec, const std::string& key) const;
    std::string get_str(const std::string& sec, const std::string& key,
                        const std::string& dflt) const;
    std::string require_str(const std::string& sec, const std::string& key) const;
    double get_num(const std::string& sec, const std::string& key, double dflt) const;
    double require_num(const std::string& sec, const std::string& key) const;
    int get_int(const std::string& sec, const std::string& key, int dflt) const;
    bool get_bool(const std::string& sec, const std::string& key, bool dflt) const;
    // comma or whitespace separated numeric list
    std::vector<double> get_list(const std::string& sec, const std::string& key) const;
};

scenario load_scenario(const std::string& path);

}  // namespace sharpwave
