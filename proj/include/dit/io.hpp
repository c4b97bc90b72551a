#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dit {

inline uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string fmt_g(double v, int digits = 17) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

// Plain-text delimited table with '#'-prefixed header metadata. Formatting is
// deterministic so identical inputs give byte-identical files.
class TableWriter {
public:
    explicit TableWriter(std::string path) : path_(std::move(path)) {}

    void header(const std::string& line) { headers_.push_back(line); }

    void row(const std::vector<double>& cells) {
        std::string line;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) line += '\t';
            line += fmt_g(cells[i]);
        }
        rows_.push_back(std::move(line));
    }

    void write() const {
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path_);
        for (const auto& h : headers_) f << "# " << h << '\n';
        for (const auto& r : rows_) f << r << '\n';
        if (!f) throw std::runtime_error("failed writing output file: " + path_);
    }

private:
    std::string path_;
    std::vector<std::string> headers_;
    std::vector<std::string> rows_;
};

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace dit
