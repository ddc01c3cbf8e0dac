#pragma once

#include <string>
#include <vector>

namespace qmcf {

// CSV emitter: ',' separator, '.' decimal point, one header row, optional
// '#'-prefixed provenance lines. Numbers are printed with %.17g so identical
// inputs give byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();

    void note(const std::string& key, const std::string& value);
    void note(const std::string& key, double value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);

    static std::string num(double v);

private:
    struct Impl;
    Impl* impl_;
};

}  // namespace qmcf
