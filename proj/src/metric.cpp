#include "dyndiv/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dyndiv/errors.hpp"

namespace dyndiv {

std::string_view to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Euclidean:
      return "euclidean";
    case MetricKind::Cosine:
      return "cosine";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean") return MetricKind::Euclidean;
  if (name == "cosine") return MetricKind::Cosine;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected euclidean or cosine)");
}

MetricSpace::MetricSpace(MetricKind kind, std::size_t dimension) : kind_(kind), dimension_(dimension) {
  if (dimension == 0) throw DimensionError("metric dimension must be positive");
}

double MetricSpace::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != dimension_ || b.size() != dimension_) {
    throw DimensionError("expected " + std::to_string(dimension_) + " coordinates, got " +
                         std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  if (kind_ == MetricKind::Euclidean) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dimension_; ++i) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < dimension_; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DegenerateVectorError("cosine distance of a zero-norm vector");
  // Rounding can push the ratio marginally past +-1.
  const double cos = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return std::max(0.0, 1.0 - cos);
}

void MetricSpace::validate(const Point& p) const {
  if (p.coords.size() != dimension_) {
    throw DimensionError("point " + std::to_string(p.id) + " has " + std::to_string(p.coords.size()) +
                         " coordinates, expected " + std::to_string(dimension_));
  }
  for (double c : p.coords) {
    if (!std::isfinite(c)) throw ValueError("point " + std::to_string(p.id) + " has a non-finite coordinate", {});
  }
  if (kind_ == MetricKind::Cosine &&
      std::all_of(p.coords.begin(), p.coords.end(), [](double c) { return c == 0.0; })) {
    throw DegenerateVectorError("point " + std::to_string(p.id) + " has zero norm under cosine distance");
  }
}

PointSet::PointSet(MetricSpace metric, std::vector<Point> points) : metric_(metric) {
  points_.reserve(points.size());
  for (auto& p : points) add(std::move(p));
}

void PointSet::add(Point p) {
  metric_.validate(p);
  if (!index_.emplace(p.id, points_.size()).second) {
    throw DuplicateIdError("duplicate point id " + std::to_string(p.id));
  }
  points_.push_back(std::move(p));
}

const Point* PointSet::find(PointId id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &points_[it->second];
}

std::vector<PointId> PointSet::ids() const {
  std::vector<PointId> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.id);
  return out;
}

double distance(const MetricSpace& metric, const Point& a, const Point& b) { return metric.distance(a, b); }

namespace {

template <typename Get>
double min_pairwise(const MetricSpace& metric, std::size_t n, Get get) {
  if (n < 2) throw TooFewPointsError("diversity needs at least two points, got " + std::to_string(n));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, metric.distance(get(i), get(j)));
  }
  return best;
}

}  // namespace

double diversity(const MetricSpace& metric, std::span<const Point> points) {
  return min_pairwise(metric, points.size(), [&](std::size_t i) -> const Point& { return points[i]; });
}

double diversity(const MetricSpace& metric, std::span<const Point* const> points) {
  return min_pairwise(metric, points.size(), [&](std::size_t i) -> const Point& { return *points[i]; });
}

double diversity(const PointSet& set) { return diversity(set.metric(), set.points()); }

}  // namespace dyndiv
