#pragma once

#include <cmath>
#include <stdexcept>

#include "cdwsd/taxonomy.hpp"

namespace cdwsd {

/// Tuning knobs for the parameterized density formula. The defaults are the
/// operating point used in the reported experiments: alpha 0.20, beta 0.
struct DensityParams {
  double alpha = 0.20;
  double beta = 0.0;
};

/// Base conceptual density of a concept holding `marks` word-senses:
/// (sum_{i=0}^{marks-1} nhyp^i) / descendants. The i=0 term is 1 even for
/// leaves (nhyp 0), so a single mark in a single-node subhierarchy scores 1.
inline double conceptual_density_base(const ConceptStats& stats, std::uint32_t marks) {
  if (marks == 0) throw std::invalid_argument("conceptual density needs at least one mark");
  double sum = 1.0, term = 1.0;
  for (std::uint32_t i = 1; i < marks; ++i) {
    term *= stats.nhyp;
    sum += term;
  }
  return sum / static_cast<double>(stats.descendants);
}

/// Parameterized conceptual density:
/// (sum_{i=0}^{marks-1} (nhyp+beta)^(i^alpha)) / descendants.
/// The i=0 exponent is defined as 0, so the first term is 1 regardless of
/// alpha and of a zero base. With alpha=1, beta=0 this is the base formula.
inline double conceptual_density(const ConceptStats& stats, std::uint32_t marks,
                                 const DensityParams& params = {}) {
  if (marks == 0) throw std::invalid_argument("conceptual density needs at least one mark");
  if (params.alpha < 0.0) throw std::invalid_argument("alpha must be non-negative");
  const double base = stats.nhyp + params.beta;
  if (base < 0.0) throw std::invalid_argument("nhyp + beta must be non-negative");
  double sum = 1.0;
  for (std::uint32_t i = 1; i < marks; ++i)
    sum += std::pow(base, std::pow(static_cast<double>(i), params.alpha));
  return sum / static_cast<double>(stats.descendants);
}

}  // namespace cdwsd
