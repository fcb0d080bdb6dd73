#include "dyndiv/cover_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dyndiv/errors.hpp"
#include "dyndiv/text.hpp"

namespace dyndiv {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::Nesting:
      return "nesting";
    case ViolationKind::Covering:
      return "covering";
    case ViolationKind::Separation:
      return "separation";
    case ViolationKind::Structure:
      return "structure";
  }
  return "unknown";
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << to_string(kind) << " violation at level " << level << ": node " << node;
  if (other) out << " vs " << *other;
  if (kind == ViolationKind::Covering || kind == ViolationKind::Separation) {
    out << ", d=" << format_real(distance) << " bound=" << format_real(bound);
  }
  return out.str();
}

std::size_t InvariantReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

CoverTree::CoverTree(MetricSpace metric, double base) : metric_(metric), base_(base) {
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw InvalidBaseError("cover tree base must be a finite real > 1, got " + format_real(base));
  }
}

double CoverTree::radius(int level) const { return std::pow(base_, level); }

int CoverTree::covering_level(double dist) const {
  int level = static_cast<int>(std::ceil(std::log(dist) / std::log(base_)));
  while (radius(level) < dist) ++level;
  while (radius(level - 1) >= dist) --level;
  return level;
}

std::optional<PointId> CoverTree::root() const {
  if (!root_) return std::nullopt;
  return node(*root_).point.id;
}

int CoverTree::max_level() const {
  if (!root_) throw EmptyTreeError("empty cover tree has no levels");
  return node(*root_).top_level;
}

int CoverTree::min_level() const {
  if (!root_) throw EmptyTreeError("empty cover tree has no levels");
  return top_counts_.begin()->first;
}

const Point* CoverTree::find(PointId id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &node(it->second).point;
}

std::optional<int> CoverTree::top_level(PointId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return node(it->second).top_level;
}

std::optional<PointId> CoverTree::parent(PointId id) const {
  const auto it = index_.find(id);
  if (it == index_.end() || !node(it->second).parent) return std::nullopt;
  return node(*node(it->second).parent).point.id;
}

PointSet CoverTree::points() const {
  std::vector<const Point*> all;
  all.reserve(size());
  for (const auto& n : nodes_) {
    if (n.alive) all.push_back(&n.point);
  }
  std::sort(all.begin(), all.end(), [](const Point* a, const Point* b) { return a->id < b->id; });
  PointSet out(metric_);
  for (const Point* p : all) out.add(*p);
  return out;
}

CoverTree::Slot CoverTree::allocate(Point p, int top_level, std::optional<Slot> parent) {
  Slot slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = nodes_.size();
    nodes_.emplace_back();
  }
  Node& n = nodes_[slot];
  n.point = std::move(p);
  n.top_level = top_level;
  n.parent = parent;
  n.children.clear();
  n.alive = true;
  index_.emplace(n.point.id, slot);
  by_level_.emplace(-top_level, n.point.id);
  ++top_counts_[top_level];
  if (parent) nodes_[*parent].children[top_level].push_back(slot);
  return slot;
}

void CoverTree::release(Slot slot) {
  Node& n = nodes_[slot];
  index_.erase(n.point.id);
  by_level_.erase({-n.top_level, n.point.id});
  if (--top_counts_[n.top_level] == 0) top_counts_.erase(n.top_level);
  n.alive = false;
  n.parent.reset();
  n.children.clear();
  n.point.coords.clear();
  free_slots_.push_back(slot);
}

void CoverTree::set_top_level(Slot slot, int level) {
  Node& n = nodes_[slot];
  by_level_.erase({-n.top_level, n.point.id});
  if (--top_counts_[n.top_level] == 0) top_counts_.erase(n.top_level);
  n.top_level = level;
  by_level_.emplace(-level, n.point.id);
  ++top_counts_[level];
}

CoverTree::Placement CoverTree::find_placement(const Point& p) const {
  const Slot root = *root_;
  const double root_dist = metric_.distance(p, node(root).point);
  if (root_dist == 0.0) return {Placement::Kind::Duplicate, root, 0};

  // Each frame is a candidate set Q_i that recursed one level deeper.
  std::vector<std::pair<int, std::vector<Candidate>>> frames;
  std::vector<Candidate> cover{{root, root_dist}};
  std::vector<Candidate> below;
  int level = node(root).top_level;
  for (;;) {
    // Children of the candidates at level - 1, self-children first.
    below.clear();
    double nearest = std::numeric_limits<double>::infinity();
    for (const Candidate& q : cover) {
      below.push_back(q);
      nearest = std::min(nearest, q.dist);
      const auto& kids = node(q.slot).children;
      const auto it = kids.find(level - 1);
      if (it == kids.end()) continue;
      for (Slot c : it->second) {
        const double d = metric_.distance(p, node(c).point);
        if (d == 0.0) return {Placement::Kind::Duplicate, c, 0};
        below.push_back({c, d});
        nearest = std::min(nearest, d);
      }
    }
    // Descendants of a level-(i-1) node lie within b^i/(b-1) of it. For
    // b >= 2 that is at most b^i and stopping once every child is beyond b^i
    // is safe; for b < 2 a child beyond b^i can still hide a descendant that
    // p would collide with, so the stop radius widens to b^i/(b-1).
    const double r = radius(level);
    const double reach = r / (base_ - 1.0);
    if (nearest > std::max(r, reach)) break;
    std::vector<Candidate> next;
    for (const Candidate& c : below) {
      if (c.dist <= reach) next.push_back(c);
    }
    frames.emplace_back(level, std::move(cover));
    cover = std::move(next);
    --level;
  }

  for (auto f = frames.rbegin(); f != frames.rend(); ++f) {
    const double r = radius(f->first);
    for (const Candidate& q : f->second) {
      if (q.dist <= r) return {Placement::Kind::Attach, q.slot, f->first - 1};
    }
  }
  return {Placement::Kind::NoParent, 0, 0};
}

InsertOutcome CoverTree::insert(Point p) {
  metric_.validate(p);
  if (index_.contains(p.id)) throw DuplicateIdError("point id " + std::to_string(p.id) + " is already stored");

  if (!root_) {
    root_ = allocate(std::move(p), 0, std::nullopt);
    return {InsertStatus::RootCreated, 0, std::nullopt, std::nullopt};
  }

  InsertOutcome outcome;
  Placement placement = find_placement(p);
  if (placement.kind == Placement::Kind::Duplicate) {
    return {InsertStatus::DuplicateRejected, std::nullopt, std::nullopt, node(placement.slot).point.id};
  }
  if (placement.kind == Placement::Kind::NoParent) {
    const int previous = node(*root_).top_level;
    set_top_level(*root_, covering_level(metric_.distance(p, node(*root_).point)));
    outcome.status = InsertStatus::RootRaised;
    outcome.previous_max_level = previous;
    placement = find_placement(p);
    if (placement.kind != Placement::Kind::Attach) {
      throw InvariantViolation("no parent for point " + std::to_string(p.id) + " after raising the root");
    }
  }
  allocate(std::move(p), placement.level, placement.slot);
  outcome.level = placement.level;
  return outcome;
}

RemoveOutcome CoverTree::remove(PointId id) {
  const auto found = index_.find(id);
  if (found == index_.end()) return RemoveOutcome::NotFound;
  const Slot target = found->second;

  if (size() == 1) {
    release(target);
    root_.reset();
    return RemoveOutcome::Removed;
  }

  std::vector<Slot> subtree;
  std::vector<Slot> stack{target};
  while (!stack.empty()) {
    const Slot s = stack.back();
    stack.pop_back();
    for (const auto& [lvl, kids] : nodes_[s].children) {
      for (Slot c : kids) {
        subtree.push_back(c);
        stack.push_back(c);
      }
    }
  }

  struct Orphan {
    Point point;
    int top_level;
  };
  std::vector<Orphan> orphans;
  orphans.reserve(subtree.size());
  for (Slot s : subtree) orphans.push_back({std::move(nodes_[s].point), nodes_[s].top_level});
  std::sort(orphans.begin(), orphans.end(), [](const Orphan& a, const Orphan& b) {
    return a.top_level != b.top_level ? a.top_level > b.top_level : a.point.id < b.point.id;
  });

  const bool was_root = target == *root_;
  if (!was_root) {
    auto& siblings = nodes_[*nodes_[target].parent].children;
    auto it = siblings.find(nodes_[target].top_level);
    std::erase(it->second, target);
    if (it->second.empty()) siblings.erase(it);
  }
  // Coordinates were moved out; release() only needs the ids.
  release(target);
  for (Slot s : subtree) release(s);

  std::size_t first = 0;
  if (was_root) {
    root_.reset();
    double farthest = 0.0;
    for (std::size_t i = 1; i < orphans.size(); ++i) {
      farthest = std::max(farthest, metric_.distance(orphans[0].point, orphans[i].point));
    }
    const int level = orphans.size() > 1 ? covering_level(farthest) : orphans[0].top_level;
    root_ = allocate(std::move(orphans[0].point), level, std::nullopt);
    first = 1;
  }
  for (std::size_t i = first; i < orphans.size(); ++i) {
    const PointId pid = orphans[i].point.id;
    if (insert(std::move(orphans[i].point)).status == InsertStatus::DuplicateRejected) {
      throw InvariantViolation("re-inserting point " + std::to_string(pid) + " found a duplicate");
    }
  }
  return RemoveOutcome::Removed;
}

std::size_t CoverTree::layer_size(int level) const {
  std::size_t count = 0;
  for (auto it = top_counts_.rbegin(); it != top_counts_.rend() && it->first >= level; ++it) count += it->second;
  // Above the root layer only the root remains.
  return root_ ? std::max<std::size_t>(count, 1) : 0;
}

std::vector<const Point*> CoverTree::layer_view_by_level(int level) const {
  if (!root_) throw EmptyTreeError("layer of an empty cover tree");
  std::vector<const Point*> out;
  out.reserve(layer_size(level));
  for (const auto& [neg_level, id] : by_level_) {
    if (-neg_level < level && !out.empty()) break;
    out.push_back(&node(index_.at(id)).point);
  }
  return out;
}

std::vector<const Point*> CoverTree::layer_view(int level) const {
  auto out = layer_view_by_level(level);
  std::sort(out.begin(), out.end(), [](const Point* a, const Point* b) { return a->id < b->id; });
  return out;
}

PointSet CoverTree::layer(int level) const {
  PointSet out(metric_);
  for (const Point* p : layer_view(level)) out.add(*p);
  return out;
}

int CoverTree::termination_level(std::size_t k) const {
  if (k < 2) throw KTooSmallError("k must be at least 2, got " + std::to_string(k));
  if (k > size()) {
    throw KTooLargeError("k=" + std::to_string(k) + " exceeds the " + std::to_string(size()) + " stored points");
  }
  std::size_t count = 0;
  for (auto it = top_counts_.rbegin(); it != top_counts_.rend(); ++it) {
    count += it->second;
    if (count >= k) return it->first;
  }
  throw InvariantViolation("layer counts do not add up to the tree size");
}

TerminationLayer CoverTree::termination_layer(std::size_t k) const {
  const int level = termination_level(k);
  return {level, layer(level)};
}

InvariantReport CoverTree::verify_invariants() const {
  InvariantReport report;
  if (!root_) {
    if (!index_.empty()) report.violations.push_back({ViolationKind::Structure, 0, std::nullopt, 0});
    return report;
  }
  auto add = [&](ViolationKind kind, PointId id, std::optional<PointId> other, int level, double d = 0.0,
                 double bound = 0.0) { report.violations.push_back({kind, id, other, level, d, bound}); };

  const Node& root = node(*root_);
  const int top = root.top_level;
  if (root.parent) add(ViolationKind::Structure, root.point.id, node(*root.parent).point.id, top);

  std::vector<const Node*> alive;
  alive.reserve(size());
  for (Slot s = 0; s < nodes_.size(); ++s) {
    const Node& n = nodes_[s];
    if (!n.alive) continue;
    alive.push_back(&n);
    for (const auto& [lvl, kids] : n.children) {
      if (n.top_level < lvl + 1) add(ViolationKind::Nesting, n.point.id, std::nullopt, lvl + 1);
      for (Slot c : kids) {
        const Node& child = nodes_[c];
        if (!child.alive || child.parent != s || child.top_level != lvl) {
          add(ViolationKind::Structure, n.point.id, child.point.id, lvl);
        }
      }
    }
    if (s == *root_) continue;
    if (n.top_level >= top) add(ViolationKind::Nesting, n.point.id, root.point.id, n.top_level);
    if (!n.parent || !nodes_[*n.parent].alive) {
      add(ViolationKind::Structure, n.point.id, std::nullopt, n.top_level);
      continue;
    }
    const Node& parent = nodes_[*n.parent];
    if (parent.top_level < n.top_level + 1) {
      add(ViolationKind::Nesting, n.point.id, parent.point.id, n.top_level + 1);
      continue;
    }
    const auto kids = parent.children.find(n.top_level);
    if (kids == parent.children.end() || std::find(kids->second.begin(), kids->second.end(), s) == kids->second.end()) {
      add(ViolationKind::Structure, n.point.id, parent.point.id, n.top_level);
    }
    const double d = metric_.distance(n.point, parent.point);
    const double bound = radius(n.top_level + 1);
    if (!(d <= bound)) add(ViolationKind::Covering, n.point.id, parent.point.id, n.top_level, d, bound);
  }

  // A pair shares every layer up to the lower of the two top levels, and b^i
  // shrinks with i, so that layer is the binding one.
  std::vector<double> radii;
  const int lowest = top_counts_.begin()->first;
  for (int lvl = lowest; lvl <= top; ++lvl) radii.push_back(radius(lvl));
  for (std::size_t i = 0; i < alive.size(); ++i) {
    for (std::size_t j = i + 1; j < alive.size(); ++j) {
      const int lvl = std::min(alive[i]->top_level, alive[j]->top_level);
      const double bound = lvl >= lowest && lvl <= top ? radii[static_cast<std::size_t>(lvl - lowest)] : radius(lvl);
      const double d = metric_.distance(alive[i]->point, alive[j]->point);
      if (!(d > bound)) {
        add(ViolationKind::Separation, alive[i]->point.id, alive[j]->point.id, lvl, d, bound);
      }
    }
  }
  return report;
}

void CoverTree::write_snapshot(std::ostream& out) const {
  if (!root_) {
    out << format_real(base_) << " none none 0\n";
    return;
  }
  out << format_real(base_) << ' ' << max_level() << ' ' << min_level() << ' ' << size() << '\n';
  std::vector<const Node*> ordered;
  ordered.reserve(size());
  for (const auto& n : nodes_) {
    if (n.alive) ordered.push_back(&n);
  }
  std::sort(ordered.begin(), ordered.end(), [](const Node* a, const Node* b) { return a->point.id < b->point.id; });
  for (const Node* n : ordered) {
    out << n->point.id << ' ' << n->top_level << ' ';
    if (n->parent) {
      out << node(*n->parent).point.id << ' ' << n->top_level + 1 << '\n';
    } else {
      out << "none none\n";
    }
  }
}

std::string CoverTree::snapshot() const {
  std::ostringstream out;
  write_snapshot(out);
  return out.str();
}

CoverTree build_tree(const PointSet& pool, std::span<const PointId> order, double base) {
  CoverTree tree(pool.metric(), base);
  for (PointId id : order) {
    const Point* p = pool.find(id);
    if (p == nullptr) throw DataError("insertion order names unknown point " + std::to_string(id));
    tree.insert(*p);
  }
  return tree;
}

CoverTree build_tree(const PointSet& pool, double base) {
  CoverTree tree(pool.metric(), base);
  for (const Point& p : pool) tree.insert(p);
  return tree;
}

}  // namespace dyndiv
