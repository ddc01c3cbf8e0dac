#include "qmcf/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qmcf {

struct CsvWriter::Impl {
    std::ofstream out;
    bool header_written = false;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("CsvWriter: cannot open " + path);
    }
}

CsvWriter::~CsvWriter() { delete impl_; }

std::string CsvWriter::num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::note(const std::string& key, const std::string& value) {
    if (impl_->header_written) throw std::logic_error("CsvWriter: notes must precede the header");
    impl_->out << "# " << key << " = " << value << "\n";
}

void CsvWriter::note(const std::string& key, double value) { note(key, num(value)); }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->out << (i ? "," : "") << columns[i];
    impl_->out << "\n";
    impl_->header_written = true;
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) impl_->out << (i ? "," : "") << num(values[i]);
    impl_->out << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) impl_->out << (i ? "," : "") << values[i];
    impl_->out << "\n";
}

}  // namespace qmcf
