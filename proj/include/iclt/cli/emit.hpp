#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iclt/clt.hpp"

namespace iclt::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// %.17g; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// Header line plus one line per row, LF endings, RFC 4180 quoting where needed.
std::string to_csv(const Table& t);
/// Array of objects with keys in column order.
nlohmann::ordered_json to_json(const Table& t);

/// Serializer with 17-significant-digit floats (non-finite as strings), two-space indent, trailing LF.
std::string dump(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const GaussianReport& r);
GaussianReport gaussian_report_from_json(const nlohmann::ordered_json& j);

/// Writes bytes as-is; failures throw IoError carrying the system message.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace iclt::cli
