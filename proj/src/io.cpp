#include "leapfrog/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lf::io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += fmt17(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += values[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (!open_) return;
    write_text_file(path_, buffer_);
    open_ = false;
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
    }
}

RunConfig RunConfig::load(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RunConfig: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hashpos = line.find('#');
        if (hashpos != std::string::npos) line.erase(hashpos);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) cfg.kv[key] = val;
    }
    return cfg;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

std::string RunConfig::canonical() const {
    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
    return out.str();
}

std::uint64_t RunConfig::hash() const {
    // identifies the computation: output location and pool size excluded
    std::ostringstream s;
    for (const auto& [k, v] : kv)
        if (k != "out" && k != "threads") s << k << '=' << v << '\n';
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace lf::io
