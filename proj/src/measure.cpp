#include "pressurelab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pressurelab/error.hpp"
#include "pressurelab/parallel.hpp"

namespace pressurelab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void validate_measure(const MarkovMeasure& mu, const Subshift& sft) {
  const auto n = static_cast<std::size_t>(sft.alphabet_size());
  if (mu.initial.size() != n || mu.transition.rows() != n || mu.transition.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "measure and system have different alphabets");
  double total = 0.0;
  for (double v : mu.initial) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "initial distribution must be >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "initial distribution must sum to 1");
  for (std::size_t a = 0; a < n; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double p = mu.transition(a, b);
      if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "transition entries must be >= 0");
      if (p > 0.0 && !sft.allowed(static_cast<int>(a), static_cast<int>(b)))
        throw Error(ErrorCode::InadmissibleWord, "measure charges a forbidden transition");
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "transition rows must sum to 1");
  }
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Symbol draw(std::mt19937_64& rng, std::span<const double> weights) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (u < acc) return static_cast<Symbol>(i);
  }
  return static_cast<Symbol>(last_positive);
}

}  // namespace

OrbitSample sample_orbit(const MarkovMeasure& mu, int length, std::uint64_t seed) {
  OrbitSample x;
  x.seed = seed;
  if (length <= 0) return x;
  std::mt19937_64 rng(splitmix64(seed));
  x.word.reserve(static_cast<std::size_t>(length));
  x.word.push_back(draw(rng, mu.initial));
  while (static_cast<int>(x.word.size()) < length) x.word.push_back(draw(rng, mu.transition.row(x.word.back())));
  return x;
}

LocalPressureTrace local_pressure(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                                  const OrbitSample& x, Scale scale, NRange window) {
  if (window.first < 1 || window.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty n-range");
  if (scale.m < 0) throw Error(ErrorCode::InvalidArgument, "scale exponent must be >= 0");
  const int k = f.depth();
  const int needed = window.last + std::max(scale.m, k - 1);
  if (static_cast<int>(x.word.size()) < needed)
    throw Error(ErrorCode::InsufficientDepth, "orbit sample shorter than n_max + max(m, k-1)");
  // cumulative log-measure of prefixes and Birkhoff sums
  std::vector<double> log_mass(static_cast<std::size_t>(needed) + 1, 0.0);
  const auto& w = x.word;
  const std::size_t a = static_cast<std::size_t>(mu.alphabet_size());
  for (int i = 0; i < needed; ++i) {
    double p = w[i] >= a ? 0.0 : (i == 0 ? mu.initial[w[0]] : mu.transition(w[i - 1], w[i]));
    log_mass[i + 1] = log_mass[i] + (p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity());
  }
  std::vector<double> birkhoff(static_cast<std::size_t>(window.last) + 1, 0.0);
  for (int i = 0; i < window.last; ++i)
    birkhoff[i + 1] = birkhoff[i] + f(std::span(w).subspan(static_cast<std::size_t>(i), static_cast<std::size_t>(k)));

  LocalPressureTrace trace;
  const int tail_start = window.first + window.size() / 2;
  trace.liminf_estimate = std::numeric_limits<double>::infinity();
  for (int n = window.first; n <= window.last; ++n) {
    const double lm = log_mass[static_cast<std::size_t>(n + scale.m)];
    double v;
    if (std::isinf(lm)) {
      trace.zero_measure = true;
      v = std::numeric_limits<double>::infinity();
    } else {
      v = (birkhoff[static_cast<std::size_t>(n)] - lm) / n;
    }
    trace.values.emplace_back(n, v);
    if (n >= tail_start) trace.liminf_estimate = std::min(trace.liminf_estimate, v);
  }
  return trace;
}

MonteCarloPressure measure_pressure_mc(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                                       Scale scale, NRange window, int samples, std::uint64_t seed,
                                       unsigned threads) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  validate_measure(mu, f.system());
  const int length = window.last + std::max(scale.m, f.depth() - 1);
  std::vector<LocalPressureTrace> traces(static_cast<std::size_t>(samples));
  parallel_for(traces.size(), threads, [&](std::size_t i) {
    const auto x = sample_orbit(mu, length, seed + i);
    traces[i] = local_pressure(mu, f, x, scale, window);
  });

  MonteCarloPressure out;
  out.samples = samples;
  std::vector<double> sums(static_cast<std::size_t>(window.size()), 0.0);
  double total = 0.0, total_sq = 0.0;
  int used = 0;
  for (const auto& t : traces) {
    if (t.zero_measure) {
      ++out.excluded;
      out.per_sample.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    ++used;
    out.per_sample.push_back(t.liminf_estimate);
    total += t.liminf_estimate;
    total_sq += t.liminf_estimate * t.liminf_estimate;
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += t.values[j].second;
  }
  if (used == 0) throw Error(ErrorCode::NumericalFailure, "every sampled orbit met a zero-measure ball");
  out.mean = total / used;
  const double var = used > 1 ? std::max(0.0, (total_sq - used * out.mean * out.mean) / (used - 1)) : 0.0;
  out.standard_error = std::sqrt(var / used);
  for (std::size_t j = 0; j < sums.size(); ++j)
    out.mean_trace.emplace_back(window.first + static_cast<int>(j), sums[j] / used);
  return out;
}

double exact_invariant_pressure(const MarkovMeasure& mu, const LocallyConstantPotential& f) {
  if (f.depth() > 2) throw Error(ErrorCode::InvalidArgument, "closed form needs depth(f) <= 2");
  const Subshift& sft = f.system();
  validate_measure(mu, sft);
  if (!mu.is_invariant(1e-9)) throw Error(ErrorCode::NonInvariantMeasure, "pi P differs from pi");
  const auto n = static_cast<std::size_t>(sft.alphabet_size());
  std::vector<bool> support(n);
  for (std::size_t a = 0; a < n; ++a) support[a] = mu.initial[a] > 0.0;
  TransitionRelation rel(static_cast<int>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (support[a] && support[b] && mu.transition(a, b) > 0.0) rel.set(static_cast<int>(a), static_cast<int>(b));
  if (!rel.is_irreducible(&support)) throw Error(ErrorCode::ReducibleSystem, "measure is not ergodic");

  double entropy = 0.0, integral = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!support[a]) continue;
    for (std::size_t b = 0; b < n; ++b) {
      const double p = mu.transition(a, b);
      if (p <= 0.0) continue;
      const double mass = mu.initial[a] * p;
      entropy -= mass * std::log(p);
      const Symbol w[2] = {static_cast<Symbol>(a), static_cast<Symbol>(b)};
      integral += mass * (f.depth() == 1 ? f(std::span(w, 1)) : f(w));
    }
  }
  return entropy + integral;
}

}  // namespace pressurelab
