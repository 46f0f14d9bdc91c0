#ifndef CANNINGS_CSV_HPP
#define CANNINGS_CSV_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cannings/errors.hpp"

namespace cannings {

// CSV cell with quoting only where the content demands it; floats carry 17
// significant digits so reruns diff cleanly
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw ValidationError("cannot open output file '" + path + "'");
    }

    static std::string field(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        q += "\"";
        return q;
    }

    static std::string field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    static std::string field(int64_t v) { return std::to_string(v); }
    static std::string field(int v) { return std::to_string(v); }

    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

}  // namespace cannings

#endif
