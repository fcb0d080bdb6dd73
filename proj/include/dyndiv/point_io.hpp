#ifndef DYNDIV_POINT_IO_HPP
#define DYNDIV_POINT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyndiv/benchgen.hpp"
#include "dyndiv/metric.hpp"

namespace dyndiv {

/// Point files hold one point per line with comma- or whitespace-separated
/// decimal coordinates. Blank lines and lines starting with '#' are skipped.
/// Ids follow the order of the data lines, starting at 0.
///
/// Throws FormatError for ragged rows or unparsable tokens and ValueError for
/// non-finite values, both carrying the 1-based line number.
PointSet read_points(std::istream& in, MetricKind kind);
PointSet ingest_points(const std::filesystem::path& path, MetricKind kind);

/// Writes `# comment` lines, then one whitespace-separated row per point in
/// pool order, each value in shortest round-trip form. Ids are implied by
/// the row order, so pools with ids other than 0..N-1 are rejected.
void write_points(std::ostream& out, const PointSet& pool, const std::vector<std::string>& comments = {});

/// Sidecar stored next to an exported instance as `<points>.meta` (JSON).
struct InstanceMeta {
  std::string generator;
  std::optional<double> known_d_star;
  std::optional<std::size_t> optimal_k;
  std::vector<PointId> insertion_order;
  std::vector<std::pair<std::string, std::string>> params;
};

std::filesystem::path meta_path(const std::filesystem::path& points);

void write_meta(std::ostream& out, const InstanceMeta& meta);
/// Throws FormatError for malformed JSON or missing fields.
InstanceMeta read_meta(std::istream& in);

/// Writes the point file and its sidecar.
void export_instance(const std::filesystem::path& path, const GeneratedInstance& instance);

/// Reads a point file plus its sidecar when present. Without a sidecar the
/// instance has no ground truth and is inserted in file order.
GeneratedInstance import_instance(const std::filesystem::path& path, MetricKind kind);

}  // namespace dyndiv

#endif  // DYNDIV_POINT_IO_HPP
