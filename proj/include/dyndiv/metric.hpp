#ifndef DYNDIV_METRIC_HPP
#define DYNDIV_METRIC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dyndiv {

using PointId = std::uint64_t;

struct Point {
  PointId id = 0;
  std::vector<double> coords;

  std::size_t dimension() const noexcept { return coords.size(); }
  friend bool operator==(const Point&, const Point&) = default;
};

enum class MetricKind { Euclidean, Cosine };

std::string_view to_string(MetricKind kind) noexcept;
/// Accepts "euclidean" or "cosine"; throws ConfigError otherwise.
MetricKind parse_metric_kind(std::string_view name);

/// A distance function together with the ambient dimension.
///
/// Cosine distance is 1 - cos(x, y). It is symmetric and zero for vectors of
/// the same direction, but it does not satisfy the triangle inequality, so the
/// cover-tree guarantees are only claimed under Euclidean distance.
class MetricSpace {
 public:
  MetricSpace(MetricKind kind, std::size_t dimension);

  static MetricSpace euclidean(std::size_t dimension) { return {MetricKind::Euclidean, dimension}; }
  static MetricSpace cosine(std::size_t dimension) { return {MetricKind::Cosine, dimension}; }

  MetricKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }

  double distance(std::span<const double> a, std::span<const double> b) const;
  double distance(const Point& a, const Point& b) const { return distance(a.coords, b.coords); }

  /// Throws DimensionError, ValueError (non-finite) or DegenerateVectorError
  /// (zero norm under Cosine) when `p` cannot live in this space.
  void validate(const Point& p) const;

  friend bool operator==(const MetricSpace&, const MetricSpace&) = default;

 private:
  MetricKind kind_;
  std::size_t dimension_;
};

/// Points with distinct ids sharing one metric space. Insertion order is kept.
class PointSet {
 public:
  explicit PointSet(MetricSpace metric) : metric_(metric) {}
  PointSet(MetricSpace metric, std::vector<Point> points);

  /// Throws DuplicateIdError for a repeated id, plus everything
  /// MetricSpace::validate throws.
  void add(Point p);

  const MetricSpace& metric() const noexcept { return metric_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(PointId id) const { return index_.contains(id); }
  /// nullptr when absent.
  const Point* find(PointId id) const;
  std::vector<PointId> ids() const;

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.metric_ == b.metric_ && a.points_ == b.points_;
  }

 private:
  MetricSpace metric_;
  std::vector<Point> points_;
  std::unordered_map<PointId, std::size_t> index_;
};

double distance(const MetricSpace& metric, const Point& a, const Point& b);

/// Minimum distance over all unordered pairs. Throws TooFewPointsError for
/// fewer than two points.
double diversity(const MetricSpace& metric, std::span<const Point> points);
double diversity(const MetricSpace& metric, std::span<const Point* const> points);
double diversity(const PointSet& set);

}  // namespace dyndiv

#endif  // DYNDIV_METRIC_HPP
