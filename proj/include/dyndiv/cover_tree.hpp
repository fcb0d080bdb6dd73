#ifndef DYNDIV_COVER_TREE_HPP
#define DYNDIV_COVER_TREE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dyndiv/metric.hpp"

namespace dyndiv {

enum class InsertStatus { Inserted, RootCreated, RootRaised, DuplicateRejected };

struct InsertOutcome {
  InsertStatus status = InsertStatus::Inserted;
  /// Highest level the point occupies. Unset for rejected duplicates.
  std::optional<int> level;
  /// Root level before the raise (RootRaised only).
  std::optional<int> previous_max_level;
  /// Existing point at distance zero (DuplicateRejected only).
  std::optional<PointId> duplicate_of;
};

enum class RemoveOutcome { Removed, NotFound };

struct TerminationLayer {
  int level;
  PointSet points;
};

enum class ViolationKind { Nesting, Covering, Separation, Structure };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  PointId node;
  std::optional<PointId> other;
  /// Layer in which the violation is observed.
  int level;
  double distance = 0.0;
  double bound = 0.0;

  std::string describe() const;
};

struct InvariantReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

struct CoverTreeTestAccess;

/// Incremental cover tree with base b > 1.
///
/// Layer C_i holds every point whose top level is >= i; a point is stored
/// once, with its self-children left implicit. Invariants, for all levels:
///   nesting     C_i is a subset of C_{i-1};
///   covering    each point first appearing in C_{i-1} has a parent q in C_i
///               with d(p, q) <= b^i;
///   separation  distinct p, q in C_i satisfy d(p, q) > b^i.
///
/// Mutations require exclusive access; const members may run concurrently.
class CoverTree {
 public:
  /// Throws InvalidBaseError unless base > 1.
  CoverTree(MetricSpace metric, double base);

  /// Descends from the root keeping only the candidates that can cover p and
  /// attaches p one level below the deepest layer at which it is separated
  /// from every candidate child. The parent is the first covering candidate
  /// in traversal order. When no layer can cover p the root level is raised
  /// to the smallest level covering p and the descent is repeated.
  InsertOutcome insert(Point p);

  /// Deletes the point and re-inserts every point of its subtree from the
  /// root. Removing the root promotes the highest remaining point of its
  /// subtree to a level that covers all others.
  RemoveOutcome remove(PointId id);

  /// All points with top level >= level, ordered by id. Throws EmptyTreeError.
  PointSet layer(int level) const;
  std::vector<const Point*> layer_view(int level) const;
  /// Layer points ordered by top level descending, then id, so that every
  /// higher layer is a prefix.
  std::vector<const Point*> layer_view_by_level(int level) const;
  std::size_t layer_size(int level) const;

  /// Largest level whose layer holds at least k points.
  /// Throws KTooSmallError for k < 2 and KTooLargeError for k > size().
  int termination_level(std::size_t k) const;
  TerminationLayer termination_layer(std::size_t k) const;

  /// Exhaustive check of all three invariants plus link consistency.
  InvariantReport verify_invariants() const;

  /// Plain-text dump: header `b i_max i_min N`, then one line
  /// `id level_top parent_id parent_level` per point in id order; the root
  /// line carries `none none` for its parent fields.
  void write_snapshot(std::ostream& out) const;
  std::string snapshot() const;

  const MetricSpace& metric() const noexcept { return metric_; }
  double base() const noexcept { return base_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }

  /// b^level.
  double radius(int level) const;

  std::optional<PointId> root() const;
  /// Level of the root layer. Throws EmptyTreeError.
  int max_level() const;
  /// Lowest top level of any point. Throws EmptyTreeError.
  int min_level() const;

  bool contains(PointId id) const { return index_.contains(id); }
  const Point* find(PointId id) const;
  std::optional<int> top_level(PointId id) const;
  std::optional<PointId> parent(PointId id) const;
  /// Every stored point, ordered by id.
  PointSet points() const;

 private:
  friend struct CoverTreeTestAccess;

  using Slot = std::size_t;

  struct Node {
    Point point;
    int top_level = 0;
    std::optional<Slot> parent;
    /// Explicit children keyed by the level at which they first appear.
    std::map<int, std::vector<Slot>> children;
    bool alive = false;
  };

  struct Candidate {
    Slot slot;
    double dist;
  };

  struct Placement {
    enum class Kind { Attach, Duplicate, NoParent } kind;
    Slot slot = 0;  // parent for Attach, existing point for Duplicate
    int level = 0;  // level at which the new point first appears
  };

  Placement find_placement(const Point& p) const;
  Slot allocate(Point p, int top_level, std::optional<Slot> parent);
  void release(Slot slot);
  void set_top_level(Slot slot, int level);
  int covering_level(double dist) const;
  const Node& node(Slot slot) const { return nodes_[slot]; }

  MetricSpace metric_;
  double base_;
  std::vector<Node> nodes_;
  std::vector<Slot> free_slots_;
  std::unordered_map<PointId, Slot> index_;
  std::optional<Slot> root_;
  /// Keys (-top_level, id): iteration walks layers from the root downward.
  std::set<std::pair<int, PointId>> by_level_;
  std::map<int, std::size_t> top_counts_;
};

/// Inserts the points of `pool` in the order of `order` (ids of `pool`).
/// Throws DataError for an unknown id.
CoverTree build_tree(const PointSet& pool, std::span<const PointId> order, double base);
/// Inserts the points of `pool` in pool order.
CoverTree build_tree(const PointSet& pool, double base);

}  // namespace dyndiv

#endif  // DYNDIV_COVER_TREE_HPP
