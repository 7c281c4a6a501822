#include "iclt/cli/emit.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace iclt::cli {

using nlohmann::ordered_json;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>)
          return csv_field(v);
        else
          return std::to_string(v);
      },
      c);
}

void dump_into(const ordered_json& j, int indent, std::string& out) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(k).dump() + ": ";
        dump_into(v, indent + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], indent + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

ordered_json cplx_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

double num(const ordered_json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  return j.get<double>();
}

cplx cplx_from(const ordered_json& j) { return {num(j.at(0)), num(j.at(1))}; }

ordered_json ks_json(const KsResult& k) { return {{"statistic", k.statistic}, {"p_value", k.p_value}}; }
KsResult ks_from(const ordered_json& j) { return {num(j.at("statistic")), num(j.at("p_value"))}; }

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + csv_field(t.columns[c]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
    out += "\n";
  }
  return out;
}

ordered_json to_json(const Table& t) {
  ordered_json arr = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json o = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c)
      std::visit([&](const auto& v) { o[t.columns[c]] = v; }, row[c]);
    arr.push_back(std::move(o));
  }
  return arr;
}

std::string dump(const ordered_json& j) {
  std::string out;
  dump_into(j, 0, out);
  return out + "\n";
}

ordered_json to_json(const GaussianReport& r) {
  ordered_json cf = ordered_json::array();
  for (const CfRow& row : r.cf_table)
    cf.push_back({{"t", cplx_json(row.t)},
                  {"empirical", cplx_json(row.empirical)},
                  {"target", row.target},
                  {"gap", row.gap}});
  return {{"count", r.count},
          {"mean", cplx_json(r.mean)},
          {"second_moment", r.second_moment},
          {"cov", {{r.cov[0][0], r.cov[0][1]}, {r.cov[1][0], r.cov[1][1]}}},
          {"cf_sup_gap", r.cf_sup_gap},
          {"ks_re", ks_json(r.ks_re)},
          {"ks_im", ks_json(r.ks_im)},
          {"radial", ks_json(r.radial)},
          {"cf_pass", r.cf_pass},
          {"ks_re_pass", r.ks_re_pass},
          {"ks_im_pass", r.ks_im_pass},
          {"radial_pass", r.radial_pass},
          {"pass", r.pass},
          {"cf_table", std::move(cf)}};
}

GaussianReport gaussian_report_from_json(const ordered_json& j) {
  GaussianReport r;
  r.count = j.at("count").get<std::size_t>();
  r.mean = cplx_from(j.at("mean"));
  r.second_moment = num(j.at("second_moment"));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r.cov[a][b] = num(j.at("cov").at(a).at(b));
  r.cf_sup_gap = num(j.at("cf_sup_gap"));
  r.ks_re = ks_from(j.at("ks_re"));
  r.ks_im = ks_from(j.at("ks_im"));
  r.radial = ks_from(j.at("radial"));
  r.cf_pass = j.at("cf_pass").get<bool>();
  r.ks_re_pass = j.at("ks_re_pass").get<bool>();
  r.ks_im_pass = j.at("ks_im_pass").get<bool>();
  r.radial_pass = j.at("radial_pass").get<bool>();
  r.pass = j.at("pass").get<bool>();
  for (const auto& row : j.at("cf_table"))
    r.cf_table.push_back({cplx_from(row.at("t")), cplx_from(row.at("empirical")), num(row.at("target")),
                          num(row.at("gap"))});
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed: " + std::strerror(errno));
}

}  // namespace iclt::cli
