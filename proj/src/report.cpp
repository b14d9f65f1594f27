#include "sumhess/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace sumhess {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_)
        throw std::runtime_error("cannot open CSV output: " + path);
}

std::string CsvWriter::quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    columns_ = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << quote(names[i]);
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("CSV write failed: " + path_);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw std::logic_error("CSV row width does not match header: " + path_);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << quote(fields[i]);
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("CSV write failed: " + path_);
}

void write_json(const std::string& path, const OrderedJson& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open JSON output: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("JSON write failed: " + path);
}

} // namespace sumhess
