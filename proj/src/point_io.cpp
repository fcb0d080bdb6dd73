#include "dyndiv/point_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "dyndiv/errors.hpp"
#include "dyndiv/text.hpp"

namespace dyndiv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Comma-separated when the line has a comma, whitespace-separated otherwise.
std::vector<std::string_view> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string_view> fields;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const auto field = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (field.empty()) throw FormatError("empty field", line_no);
      fields.push_back(field);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_number(std::string_view token, std::size_t line_no) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ptr != token.data() + token.size() || (res.ec != std::errc{} && res.ec != std::errc::result_out_of_range)) {
    throw FormatError("not a number: '" + std::string(token) + "'", line_no);
  }
  if (res.ec == std::errc::result_out_of_range || !std::isfinite(value)) {
    throw ValueError("non-finite coordinate '" + std::string(token) + "'", line_no);
  }
  return value;
}

}  // namespace

PointSet read_points(std::istream& in, MetricKind kind) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body, line_no);
    std::vector<double> coords;
    coords.reserve(fields.size());
    for (const auto& f : fields) coords.push_back(parse_number(f, line_no));
    if (!rows.empty() && coords.size() != rows.front().size()) {
      throw FormatError("expected " + std::to_string(rows.front().size()) + " coordinates, found " +
                            std::to_string(coords.size()),
                        line_no);
    }
    rows.push_back(std::move(coords));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw FormatError("no points in input", std::nullopt);

  PointSet pool(MetricSpace(kind, rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      pool.add({static_cast<PointId>(i), std::move(rows[i])});
    } catch (const DegenerateVectorError& e) {
      throw DegenerateVectorError(std::string(e.what()) + " (line " + std::to_string(row_lines[i]) + ")");
    }
  }
  return pool;
}

PointSet ingest_points(const std::filesystem::path& path, MetricKind kind) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_points(in, kind);
}

void write_points(std::ostream& out, const PointSet& pool, const std::vector<std::string>& comments) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].id != i) throw DataError("point ids must be 0..N-1 in order to be written to a point file");
  }
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const Point& p : pool) {
    for (std::size_t d = 0; d < p.coords.size(); ++d) {
      if (d) out << ' ';
      out << format_real(p.coords[d]);
    }
    out << '\n';
  }
}

std::filesystem::path meta_path(const std::filesystem::path& points) {
  std::filesystem::path out = points;
  out += ".meta";
  return out;
}

void write_meta(std::ostream& out, const InstanceMeta& meta) {
  nlohmann::ordered_json j;
  j["generator"] = meta.generator;
  j["known_d_star"] = meta.known_d_star ? nlohmann::ordered_json(*meta.known_d_star) : nullptr;
  j["optimal_k"] = meta.optimal_k ? nlohmann::ordered_json(*meta.optimal_k) : nullptr;
  j["insertion_order"] = meta.insertion_order;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : meta.params) params[key] = value;
  j["params"] = std::move(params);
  out << j.dump(2) << '\n';
}

InstanceMeta read_meta(std::istream& in) {
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw FormatError(std::string("malformed metadata: ") + e.what(), std::nullopt);
  }
  try {
    InstanceMeta meta;
    meta.generator = j.at("generator").get<std::string>();
    if (!j.at("known_d_star").is_null()) meta.known_d_star = j.at("known_d_star").get<double>();
    if (!j.at("optimal_k").is_null()) meta.optimal_k = j.at("optimal_k").get<std::size_t>();
    meta.insertion_order = j.at("insertion_order").get<std::vector<PointId>>();
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) meta.params.emplace_back(key, value.get<std::string>());
    }
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid metadata: ") + e.what(), std::nullopt);
  }
}

void export_instance(const std::filesystem::path& path, const GeneratedInstance& instance) {
  std::vector<std::string> comments{"generator " + instance.generator,
                                    "points " + std::to_string(instance.pool.size()) + " dimension " +
                                        std::to_string(instance.pool.metric().dimension())};
  if (instance.known_d_star) comments.push_back("known_d_star " + format_real(*instance.known_d_star));
  if (instance.optimal_k) comments.push_back("optimal_k " + std::to_string(*instance.optimal_k));
  {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_points(out, instance.pool, comments);
  }
  std::ofstream out(meta_path(path));
  if (!out) throw DataError("cannot write " + meta_path(path).string());
  write_meta(out, {instance.generator, instance.known_d_star, instance.optimal_k, instance.insertion_order,
                   instance.metadata});
}

GeneratedInstance import_instance(const std::filesystem::path& path, MetricKind kind) {
  PointSet pool = ingest_points(path, kind);
  GeneratedInstance out{"file", std::move(pool), {}, std::nullopt, std::nullopt, {{"input", path.string()}}};
  const auto sidecar = meta_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    InstanceMeta meta = read_meta(in);
    std::unordered_set<PointId> seen;
    for (PointId id : meta.insertion_order) {
      if (!out.pool.contains(id) || !seen.insert(id).second) {
        throw FormatError("metadata insertion order does not match the point file", std::nullopt);
      }
    }
    if (!meta.insertion_order.empty() && seen.size() != out.pool.size()) {
      throw FormatError("metadata insertion order does not cover every point", std::nullopt);
    }
    out.generator = meta.generator;
    out.known_d_star = meta.known_d_star;
    out.optimal_k = meta.optimal_k;
    out.insertion_order = std::move(meta.insertion_order);
    out.metadata = std::move(meta.params);
  }
  if (out.insertion_order.empty()) out.insertion_order = out.pool.ids();
  return out;
}

}  // namespace dyndiv
