#ifndef DYNDIV_ORACLE_HPP
#define DYNDIV_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include "dyndiv/metric.hpp"
#include "dyndiv/selection.hpp"

namespace dyndiv {

/// Largest number of k-subsets exact_diverse will enumerate.
inline constexpr std::uint64_t kOracleBudget = 10'000'000;

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t subset_count(std::size_t n, std::size_t k);
bool oracle_feasible(std::size_t n, std::size_t k);

struct OracleResult {
  PointSet optimal_set;
  double d_star;
  /// Complete k-subsets reached after pruning.
  std::uint64_t instances_enumerated;
};

/// Exact k-max-min diversification by branch and bound over k-subsets in
/// lexicographic id order. A partial subset is abandoned once its pairwise
/// minimum cannot beat the incumbent, so the lexicographically smallest
/// maximizer is returned. Throws BudgetExceededError when C(n, k) exceeds
/// kOracleBudget.
OracleResult exact_diverse(const PointSet& pool, std::size_t k);

/// Proven approximation factor of a method; ICT methods need the tree base.
double method_alpha(Method method, std::optional<double> base);

struct RatioCheck {
  double d_star;
  /// d* / achieved diversity (infinite when the selection has diversity 0).
  double ratio;
  double alpha;
  /// ratio > alpha + 1e-9.
  bool violates;
};

RatioCheck check_ratio(double d_star, const DiverseSelection& selection);
/// Computes d* with exact_diverse first.
RatioCheck check_ratio(const PointSet& pool, std::size_t k, const DiverseSelection& selection);

}  // namespace dyndiv

#endif  // DYNDIV_ORACLE_HPP
