#include "sharpwave/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sharpwave/errors.hpp"

namespace sharpwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_num(const std::string& raw, const std::string& where) {
    const std::string s = trim(raw);
    if (s.empty()) throw invalid_params("scenario: empty numeric value for " + where);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw invalid_params("scenario: expected a number for " + where + ", got '" + s + "'");
    return v;
}

}  // namespace

bool scenario::has_section(const std::string& sec) const { return sections.count(sec) > 0; }

bool scenario::has(const std::string& sec, const std::string& key) const {
    const auto it = sections.find(sec);
    return it != sections.end() && it->second.count(key) > 0;
}

std::string scenario::get_str(const std::string& sec, const std::string& key,
                              const std::string& dflt) const {
    const auto it = sections.find(sec);
    if (it == sections.end()) return dflt;
    const auto kt = it->second.find(key);
    return kt == it->second.end() ? dflt : kt->second;
}

std::string scenario::require_str(const std::string& sec, const std::string& key) const {
    if (!has(sec, key))
        throw invalid_params("scenario " + path + ": missing required key '" + key +
                             "' in section [" + sec + "]");
    return sections.at(sec).at(key);
}

double scenario::get_num(const std::string& sec, const std::string& key, double dflt) const {
    if (!has(sec, key)) return dflt;
    return parse_num(sections.at(sec).at(key), "[" + sec + "] " + key);
}

double scenario::require_num(const std::string& sec, const std::string& key) const {
    return parse_num(require_str(sec, key), "[" + sec + "] " + key);
}

int scenario::get_int(const std::string& sec, const std::string& key, int dflt) const {
    if (!has(sec, key)) return dflt;
    const double v = parse_num(sections.at(sec).at(key), "[" + sec + "] " + key);
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
        throw invalid_params("scenario: expected an integer for [" + sec + "] " + key);
    return n;
}

bool scenario::get_bool(const std::string& sec, const std::string& key, bool dflt) const {
    if (!has(sec, key)) return dflt;
    const std::string v = sections.at(sec).at(key);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw invalid_params("scenario: expected a boolean for [" + sec + "] " + key + ", got '" + v +
                         "'");
}

std::vector<double> scenario::get_list(const std::string& sec, const std::string& key) const {
    std::vector<double> out;
    if (!has(sec, key)) return out;
    std::string s = sections.at(sec).at(key);
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(parse_num(tok, "[" + sec + "] " + key));
    return out;
}

scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_params("scenario: cannot open " + path);
    scenario sc;
    sc.path = path;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw invalid_params("scenario " + path + ":" + std::to_string(lineno) +
                                     ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw invalid_params("scenario " + path + ":" + std::to_string(lineno) +
                                     ": empty section name");
            sc.sections[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw invalid_params("scenario " + path + ":" + std::to_string(lineno) +
                                 ": expected 'key = value' inside a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw invalid_params("scenario " + path + ":" + std::to_string(lineno) + ": empty key");
        sc.sections[section][key] = val;
    }
    return sc;
}

}  // namespace sharpwave
