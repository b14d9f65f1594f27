#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace sumhess {

using OrderedJson = nlohmann::ordered_json;

/// Shortest-faithful decimal at 17 significant digits; round-trips to the
/// identical double.
std::string fmt17(double v);

/// Single-header-row CSV with RFC-4180-style quoting and '.' decimals.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);

    static std::string quote(const std::string& field);

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_ = 0;
};

void write_json(const std::string& path, const OrderedJson& j);

} // namespace sumhess
