#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lf::io {

// 17 significant digits, enough to round-trip an IEEE double
std::string fmt17(double v);

struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    void close();
    ~CsvWriter();

  private:
    std::string path_;
    std::string buffer_;
    bool open_ = true;
};

// Reproducible run configuration: a flat key-value text file, later
// overridden by command-line flags. Serialization is canonical (sorted
// keys) so identical configs hash identically.
struct RunConfig {
    std::map<std::string, std::string> kv;

    static RunConfig load(const std::string& path);
    void set(const std::string& key, const std::string& value) { kv[key] = value; }
    bool has(const std::string& key) const { return kv.count(key) > 0; }
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get(const std::string& key, const std::string& fallback) const;

    std::string canonical() const;   // sorted key=value lines
    std::uint64_t hash() const;      // FNV-1a of the canonical form
};

void write_text_file(const std::string& path, const std::string& content);

} // namespace lf::io
