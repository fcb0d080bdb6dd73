#ifndef DYNDIV_THEORY_HPP
#define DYNDIV_THEORY_HPP

#include <cstddef>
#include <ostream>
#include <vector>

// Approximation bounds for cover-tree based diversification, normalized to an
// optimal diversity of 1. beta is the optimum divided by b^i for the
// termination level i.

namespace dyndiv {

/// 2b^2 / (b - 1). Throws InvalidBaseError for b <= 1.
double alpha_basic(double b);
/// 2 + 2b / (b - 1).
double alpha_greedy_inherit(double b);
/// 1 + 2b / (b - 1): best k-subset of the termination layer vs the optimum.
double alpha_layer(double b);
/// Exclusive upper end of the attainable beta range, 2b^2 / (b - 1).
double beta_upper_bound(double b);

/// max{1/beta, 1 - 2b / (beta (b - 1))}. Throws BetaRangeError unless
/// 1 <= beta < beta_upper_bound(b).
double diversity_bound(double beta, double b);
/// max{1/beta, (1 - 2b / (beta (b - 1))) / 2}.
double greedy_diversity_bound(double beta, double b);
/// b / beta: separation of the layer above the termination layer.
double inherited_separation(double beta, double b);

/// beta at which the two branches of diversity_bound meet.
double bound_intercept(double b);
/// beta at which the two branches of greedy_diversity_bound meet.
double greedy_bound_intercept(double b);

struct BoundMinimum {
  double beta;
  double value;
};

/// Minimum over `samples` uniform betas in [1, beta_upper_bound(b)) plus the
/// closed-form intercept.
BoundMinimum minimize_diversity_bound(double b, std::size_t samples = 100000);
BoundMinimum minimize_greedy_diversity_bound(double b, std::size_t samples = 100000);

struct BoundSample {
  double beta;
  double bound_any;
  double bound_greedy;
};

std::vector<BoundSample> bound_curve(double b, std::size_t samples);
/// Header `beta,bound_any,bound_greedy`.
void write_bound_csv(std::ostream& out, const std::vector<BoundSample>& curve);

struct AlphaSample {
  double b;
  double alpha_basic;
  double alpha_greedy_inherit;
};

/// `samples` evenly spaced bases in (b_lo, b_hi]; b_lo itself is excluded.
std::vector<AlphaSample> alpha_curve(double b_lo, double b_hi, std::size_t samples);
/// Header `b,alpha_basic,alpha_greedy_inherit`.
void write_alpha_csv(std::ostream& out, const std::vector<AlphaSample>& curve);

}  // namespace dyndiv

#endif  // DYNDIV_THEORY_HPP
