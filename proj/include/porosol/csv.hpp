#ifndef POROSOL_CSV_HPP
#define POROSOL_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace porosol {

/// Minimal CSV emitter. Fields containing separators or quotes are quoted;
/// `comment` lines start with '#'. Flushes and fails loudly on I/O errors
/// (std::runtime_error with the path).
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();

    void comment(const std::string& text);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::string path_;
    std::ofstream out_;
    void check() const;
};

/// Parsed CSV with '#' comment lines skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace porosol

#endif
