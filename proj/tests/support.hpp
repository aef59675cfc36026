#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <span>
#include <vector>

#include "singulim/polynomial.hpp"
#include "singulim/rational_function.hpp"

namespace testing {

// SINGULIM_SEED overrides the default seed of every randomized test.
inline std::uint64_t seed(std::uint64_t fallback = 20240601) {
  if (const char* env = std::getenv("SINGULIM_SEED")) return std::strtoull(env, nullptr, 10);
  return fallback;
}

// mpq_class(n, d) does not reduce; every exact test value goes through here.
inline singulim::Rational rat(long n, long d = 1) {
  singulim::Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() + salt); }

inline singulim::Polynomial random_polynomial(std::mt19937_64& gen, std::size_t n_vars, unsigned max_degree,
                                              std::size_t max_terms, int coeff_bound = 9) {
  std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
  std::uniform_int_distribution<unsigned> expo(0, max_degree);
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  std::vector<std::pair<singulim::Monomial, singulim::Rational>> terms;
  const std::size_t k = count(gen);
  for (std::size_t t = 0; t < k; ++t) {
    singulim::Monomial m(n_vars, 0);
    unsigned budget = expo(gen);
    for (std::size_t i = 0; i < n_vars && budget > 0; ++i) {
      std::uniform_int_distribution<unsigned> part(0, budget);
      m[i] = part(gen);
      budget -= m[i];
    }
    terms.emplace_back(m, coeff(gen));
  }
  return singulim::Polynomial::from_terms(n_vars, terms);
}

// Central differences with step h scaled to the coordinate.
inline std::vector<double> fd_gradient(const singulim::RationalFunction& f, std::span<const double> x,
                                       double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    const double step = h * std::max(1.0, std::abs(x[i]));
    xp[i] += step;
    xm[i] -= step;
    g[i] = (f.value(xp) - f.value(xm)) / (2 * step);
  }
  return g;
}

inline double rel_error(std::span<const double> a, std::span<const double> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(1.0, std::sqrt(den));
}

}  // namespace testing
