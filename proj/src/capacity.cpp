#include "pressurelab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "forward_sums.hpp"
#include "pressurelab/error.hpp"
#include "pressurelab/parallel.hpp"

namespace pressurelab {

namespace {

void check_same_system(const Subshift& sft, const LocallyConstantPotential& f) {
  if (!(sft.relation() == f.system().relation()))
    throw Error(ErrorCode::InvalidArgument, "potential is defined on a different subshift");
}

}  // namespace

double log_partition_function(const Subshift& sft, const SubsetSpec& z,
                              const LocallyConstantPotential& f, int n, Scale scale) {
  check_same_system(sft, f);
  const int len = separated_word_length(n, scale);
  const int k = f.depth();
  const int keep = std::max(1, k - 1);
  const int determined = std::min(n, std::max(0, len - k + 1));
  detail::TrackerAutomaton tracker(z, sft);

  // key: (last `keep` symbols, tracker state)
  using Key = std::pair<Word, int>;
  std::map<Key, double> layer{{Key{Word{}, tracker.initial()}, 0.0}};
  for (int q = 0; q < len; ++q) {
    std::map<Key, double> next;
    for (const auto& [key, logw] : layer) {
      const auto& [suffix, state] = key;
      for (int b = 0; b < sft.alphabet_size(); ++b) {
        if (!suffix.empty() && !sft.allowed(suffix.back(), b)) continue;
        const int ns = tracker.next(state, static_cast<Symbol>(b));
        if (ns < 0) continue;
        Word w = suffix;
        w.push_back(static_cast<Symbol>(b));
        double gain = 0.0;
        const int j = q - k + 1;
        if (j >= 0 && j < determined) gain = f(std::span(w).last(static_cast<std::size_t>(k)));
        if (static_cast<int>(w.size()) > keep) w.erase(w.begin());
        auto [it, fresh] = next.emplace(Key{std::move(w), ns}, logw + gain);
        if (!fresh) it->second = detail::log_add_exp(it->second, logw + gain);
      }
    }
    layer.swap(next);
  }

  detail::ExtremalTails tails(f, Extremum::sup, n);
  double total = -detail::kInf;
  for (const auto& [key, logw] : layer) {
    const auto& [suffix, state] = key;
    if (!tracker.accepts(state, len)) continue;
    const int first = determined - (len - static_cast<int>(suffix.size()));
    total = detail::log_add_exp(total, logw + tails.over_extensions(suffix, first, n - determined));
  }
  return total;
}

double partition_function(const Subshift& sft, const SubsetSpec& z,
                          const LocallyConstantPotential& f, int n, Scale scale) {
  return std::exp(log_partition_function(sft, z, f, n, scale));
}

std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

CapacityEstimate capacity_pressure(const Subshift& sft, const SubsetSpec& z,
                                   const LocallyConstantPotential& f, Scale scale, NRange window,
                                   unsigned threads) {
  if (window.first < 1 || window.size() < 4)
    throw Error(ErrorCode::InvalidArgument, "capacity window needs at least 4 horizons >= 1");
  separated_word_length(window.first, scale);  // rejects m = 0 up front

  CapacityEstimate est;
  est.scale = scale;
  est.window = window;
  est.approximation_depth = window.last + scale.m - 1;
  est.log_p.resize(static_cast<std::size_t>(window.size()));
  parallel_for(est.log_p.size(), threads, [&](std::size_t i) {
    const int n = window.first + static_cast<int>(i);
    est.log_p[i] = {n, log_partition_function(sft, z, f, n, scale)};
  });
  for (const auto& [n, lp] : est.log_p)
    if (!std::isfinite(lp)) throw Error(ErrorCode::EmptyTarget, "subset misses every word of length n+m-1");

  std::vector<double> xs, ys;
  for (const auto& [n, lp] : est.log_p) {
    xs.push_back(n);
    ys.push_back(lp);
  }
  std::tie(est.slope, est.intercept) = least_squares(xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i)
    est.fit_residual = std::max(est.fit_residual, std::abs(ys[i] - est.slope * xs[i] - est.intercept));
  const int tail_start = window.first + window.size() / 2;
  est.max_tail = -detail::kInf;
  for (const auto& [n, lp] : est.log_p)
    if (n >= tail_start) est.max_tail = std::max(est.max_tail, lp / n);
  return est;
}

}  // namespace pressurelab
