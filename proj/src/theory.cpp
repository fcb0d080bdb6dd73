#include "dyndiv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyndiv/errors.hpp"
#include "dyndiv/text.hpp"

namespace dyndiv {

namespace {

void check_base(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidBaseError("base must be a finite real > 1, got " + format_real(b));
}

void check_beta(double beta, double b) {
  check_base(b);
  if (!(beta >= 1.0) || !(beta < beta_upper_bound(b))) {
    throw BetaRangeError("beta=" + format_real(beta) + " outside [1, " + format_real(beta_upper_bound(b)) + ")");
  }
}

double covering_branch(double beta, double b) { return 1.0 - 2.0 * b / (beta * (b - 1.0)); }

template <typename F>
BoundMinimum minimize(F f, double b, std::size_t samples, double intercept) {
  BoundMinimum best{intercept, f(intercept)};
  const double lo = 1.0;
  const double hi = beta_upper_bound(b);
  for (std::size_t j = 0; j < samples; ++j) {
    const double beta = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(samples);
    const double v = f(beta);
    if (v < best.value) best = {beta, v};
  }
  return best;
}

}  // namespace

double alpha_basic(double b) {
  check_base(b);
  return 2.0 * b * b / (b - 1.0);
}

double alpha_greedy_inherit(double b) {
  check_base(b);
  return 2.0 + 2.0 * b / (b - 1.0);
}

double alpha_layer(double b) {
  check_base(b);
  return 1.0 + 2.0 * b / (b - 1.0);
}

double beta_upper_bound(double b) {
  check_base(b);
  return 2.0 * b * b / (b - 1.0);
}

double diversity_bound(double beta, double b) {
  check_beta(beta, b);
  return std::max(1.0 / beta, covering_branch(beta, b));
}

double greedy_diversity_bound(double beta, double b) {
  check_beta(beta, b);
  return std::max(1.0 / beta, 0.5 * covering_branch(beta, b));
}

double inherited_separation(double beta, double b) {
  check_beta(beta, b);
  return b / beta;
}

double bound_intercept(double b) { return alpha_layer(b); }

double greedy_bound_intercept(double b) { return alpha_greedy_inherit(b); }

BoundMinimum minimize_diversity_bound(double b, std::size_t samples) {
  return minimize([b](double beta) { return diversity_bound(beta, b); }, b, samples, bound_intercept(b));
}

BoundMinimum minimize_greedy_diversity_bound(double b, std::size_t samples) {
  return minimize([b](double beta) { return greedy_diversity_bound(beta, b); }, b, samples,
                  greedy_bound_intercept(b));
}

std::vector<BoundSample> bound_curve(double b, std::size_t samples) {
  std::vector<BoundSample> out;
  out.reserve(samples);
  const double hi = beta_upper_bound(b);
  for (std::size_t j = 0; j < samples; ++j) {
    const double beta = 1.0 + (hi - 1.0) * static_cast<double>(j) / static_cast<double>(samples);
    out.push_back({beta, diversity_bound(beta, b), greedy_diversity_bound(beta, b)});
  }
  return out;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundSample>& curve) {
  out << "beta,bound_any,bound_greedy\n";
  for (const auto& s : curve) {
    out << format_real(s.beta) << ',' << format_real(s.bound_any) << ',' << format_real(s.bound_greedy) << '\n';
  }
}

std::vector<AlphaSample> alpha_curve(double b_lo, double b_hi, std::size_t samples) {
  check_base(b_hi);
  if (!(b_lo >= 1.0) || !(b_lo < b_hi)) throw ConfigError("alpha curve needs 1 <= b_lo < b_hi");
  std::vector<AlphaSample> out;
  out.reserve(samples);
  for (std::size_t j = 1; j <= samples; ++j) {
    const double b = b_lo + (b_hi - b_lo) * static_cast<double>(j) / static_cast<double>(samples);
    out.push_back({b, alpha_basic(b), alpha_greedy_inherit(b)});
  }
  return out;
}

void write_alpha_csv(std::ostream& out, const std::vector<AlphaSample>& curve) {
  out << "b,alpha_basic,alpha_greedy_inherit\n";
  for (const auto& s : curve) {
    out << format_real(s.b) << ',' << format_real(s.alpha_basic) << ',' << format_real(s.alpha_greedy_inherit)
        << '\n';
  }
}

}  // namespace dyndiv
