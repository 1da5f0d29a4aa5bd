#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace primelab {

// Fixed-format double printing so identical runs produce byte-identical files.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// CSV contract: one '#'-prefixed metadata line, then the header, then rows.
// LF line endings, UTF-8.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void metadata(const std::string& line) { os_ << "# " << line << "\n"; }
    void header(const std::string& columns) { os_ << columns << "\n"; }

    CsvWriter& field(const std::string& s) {
        if (started_) os_ << ",";
        os_ << s;
        started_ = true;
        return *this;
    }
    CsvWriter& field(double x) { return field(fmt_double(x)); }
    CsvWriter& field(uint64_t x) { return field(std::to_string(x)); }
    CsvWriter& field(int64_t x) { return field(std::to_string(x)); }
    CsvWriter& field(int x) { return field(std::to_string(x)); }
    void end_row() {
        os_ << "\n";
        started_ = false;
    }

  private:
    std::ostream& os_;
    bool started_ = false;
};

} // namespace primelab
