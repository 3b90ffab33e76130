#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pressurelab/symbolic.hpp"
#include "pressurelab/transfer.hpp"

namespace pressurelab {

struct OrbitSample {
  Word word;
  std::uint64_t seed = 0;
};

/// Draws a length-`length` prefix of a mu-typical orbit; reproducible from the seed.
OrbitSample sample_orbit(const MarkovMeasure& mu, int length, std::uint64_t seed);

struct LocalPressureTrace {
  std::vector<std::pair<int, double>> values;  // (n, (f_n(x) - log mu(B_n(x, eps))) / n)
  double liminf_estimate = 0.0;                // min over the upper half of the window
  bool zero_measure = false;                   // some ball in the window has mu = 0
};

/// Exact per-n values along one orbit; the word must cover n_max + max(m, k-1) symbols.
LocalPressureTrace local_pressure(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                                  const OrbitSample& x, Scale scale, NRange window);

struct MonteCarloPressure {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
  int excluded = 0;  // orbits hitting a zero-measure ball
  std::vector<double> per_sample;                  // liminf estimates, NaN when excluded
  std::vector<std::pair<int, double>> mean_trace;  // average local value per n
};

MonteCarloPressure measure_pressure_mc(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                                       Scale scale, NRange window, int samples, std::uint64_t seed,
                                       unsigned threads = 1);

/// h_mu + integral of f for an ergodic invariant Markov measure (depth(f) <= 2).
double exact_invariant_pressure(const MarkovMeasure& mu, const LocallyConstantPotential& f);

/// Throws unless rows are stochastic, the initial vector is a distribution and the
/// measure lives on the system of f.
void validate_measure(const MarkovMeasure& mu, const Subshift& sft);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pressurelab
