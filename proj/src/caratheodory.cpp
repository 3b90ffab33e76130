#include "pressurelab/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cover_engine.hpp"
#include "pressurelab/error.hpp"
#include "pressurelab/linear_program.hpp"

namespace pressurelab {

using detail::CoverProblem;
using detail::kInf;

int WeightedCover::min_n() const {
  int best = 0;
  for (std::size_t i = 0; i < balls.size(); ++i)
    best = i == 0 ? balls[i].n : std::min(best, balls[i].n);
  return best;
}

double cover_value(const WeightedCover& cover, const LocallyConstantPotential& f, double s,
                   bool centered) {
  if (cover.balls.empty()) throw Error(ErrorCode::InvalidArgument, "cover is empty");
  if (!cover.weights.empty() && cover.weights.size() != cover.balls.size())
    throw Error(ErrorCode::InvalidArgument, "one weight per ball is required");
  double total = 0.0;
  for (std::size_t i = 0; i < cover.balls.size(); ++i) {
    const Ball& b = cover.balls[i];
    if (static_cast<int>(b.center.size()) != bowen_ball_word_length(b.n, b.scale))
      throw Error(ErrorCode::InvalidArgument, "ball center must have length n + m");
    const double c = cover.weights.empty() ? 1.0 : cover.weights[i];
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "weights must be finite and > 0");
    const double S = centered ? inf_birkhoff_on_cylinder(f, b.center, b.n)
                              : sup_birkhoff_on_cylinder(f, b.center, b.n);
    total += c * std::exp(-s * b.n + S);
  }
  return total;
}

namespace {

CoverProblem problem(const Subshift& sft, const SubsetSpec& z, const LocallyConstantPotential& f,
                     double s, int N, int offset, int L, Extremum which) {
  return CoverProblem{&sft, &z, &f, s, N, L, offset, which};
}

}  // namespace

double log_min_cover_value(const Subshift& sft, const SubsetSpec& z,
                           const LocallyConstantPotential& f, double s, int N, Scale scale, int L) {
  return detail::log_min_cover(problem(sft, z, f, s, N, scale.m, L, Extremum::sup));
}

double min_cover_value(const Subshift& sft, const SubsetSpec& z, const LocallyConstantPotential& f,
                       double s, int N, Scale scale, int L) {
  return std::exp(log_min_cover_value(sft, z, f, s, N, scale, L));
}

double log_centered_cover_value(const Subshift& sft, const SubsetSpec& z,
                                const LocallyConstantPotential& f, double s, int N, Scale scale,
                                int L) {
  return detail::log_min_cover(problem(sft, z, f, s, N, scale.m, L, Extremum::inf));
}

double log_string_cover_value(const Subshift& sft, const SubsetSpec& z,
                              const LocallyConstantPotential& f, double s, int N, int q, int L) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "partition depth q must be >= 1");
  return detail::log_min_cover(problem(sft, z, f, s, N, q - 1, L, Extremum::sup));
}

double string_cover_value(const Subshift& sft, const SubsetSpec& z,
                          const LocallyConstantPotential& f, double s, int N, int q, int L) {
  return std::exp(log_string_cover_value(sft, z, f, s, N, q, L));
}

namespace {

// log of the LP optimum for one instance, costs given in the log domain
double log_lp_value(const detail::CoverInstance& inst, double log_shift) {
  double top = -kInf;
  for (double c : inst.log_costs) top = std::max(top, c - log_shift);
  std::vector<double> costs;
  costs.reserve(inst.log_costs.size());
  for (double c : inst.log_costs) costs.push_back(std::exp(c - log_shift - top));
  const auto fc = solve_fractional_cover(inst.covered, inst.leaves, costs);
  return top + std::log(fc.value);
}

}  // namespace

double log_weighted_cover_value(const Subshift& sft, const SubsetSpec& k,
                                const LocallyConstantPotential& f, double s, int N, Scale scale,
                                int L, LpMode mode, std::uint64_t budget) {
  const CoverProblem p = problem(sft, k, f, s, N, scale.m, L, Extremum::sup);
  detail::validate(p);
  detail::TrackerAutomaton tracker(k, sft);
  double total = -kInf;
  if (mode == LpMode::single) {
    const auto inst = detail::build_instance(p, Word{}, tracker.initial(), tracker, budget);
    if (inst.leaves > 0) total = log_lp_value(inst, 0.0);
  } else {
    // no candidate ball is shallower than N + m, so the LP splits into one block per
    // depth-(N+m) word; blocks with equal keys differ only by their prefix factor
    for (const auto& g : detail::group_roots(p, N + scale.m, tracker)) {
      const auto inst = detail::build_instance(p, g.representative, g.state, tracker, budget);
      if (inst.leaves == 0) continue;
      const double rep_factor = detail::log_prefix_factor(p, g.representative);
      total = detail::log_add_exp(total, g.log_total_factor + log_lp_value(inst, rep_factor));
    }
  }
  if (total == -kInf) throw Error(ErrorCode::EmptyTarget, "subset approximation at depth L is empty");
  return total;
}

double weighted_cover_value(const Subshift& sft, const SubsetSpec& k,
                            const LocallyConstantPotential& f, double s, int N, Scale scale, int L,
                            LpMode mode) {
  return std::exp(log_weighted_cover_value(sft, k, f, s, N, scale, L, mode));
}

WeightedCoverSolution optimal_weighted_cover(const Subshift& sft, const SubsetSpec& k,
                                             const LocallyConstantPotential& f, double s, int N,
                                             Scale scale, int L) {
  const CoverProblem p = problem(sft, k, f, s, N, scale.m, L, Extremum::sup);
  detail::validate(p);
  detail::TrackerAutomaton tracker(k, sft);
  const auto inst = detail::build_instance(p, Word{}, tracker.initial(), tracker, kDefaultEnumerationBudget);
  if (inst.leaves == 0) throw Error(ErrorCode::EmptyTarget, "subset approximation at depth L is empty");
  std::vector<double> costs;
  for (double c : inst.log_costs) costs.push_back(std::exp(c));
  const auto fc = solve_fractional_cover(inst.covered, inst.leaves, costs);
  WeightedCoverSolution out;
  out.value = fc.value;
  out.dual_value = std::accumulate(fc.packing.begin(), fc.packing.end(), 0.0);
  for (std::size_t i = 0; i < inst.balls.size(); ++i) {
    if (fc.weights[i] <= 0.0) continue;
    out.cover.balls.push_back(Ball{inst.balls[i], static_cast<int>(inst.balls[i].size()) - scale.m, scale});
    out.cover.weights.push_back(fc.weights[i]);
  }
  for_each_word(sft, L, [&](const Word& w) {
    if (SubsetTracker(k, sft).meets(w)) out.leaves.push_back(w);
  });
  return out;
}

std::string_view to_string(Estimator e) {
  return e == Estimator::window_shift ? "window_shift" : "threshold";
}

namespace {

template <class LogValue>
CriticalExponent critical_exponent(LogValue&& log_value, const LocallyConstantPotential& f,
                                   int alphabet, int N, int L, int m, const SearchOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (L < N + m) throw Error(ErrorCode::DepthTooShallow, "L must be at least N + m");
  CriticalExponent ce;
  ce.N = N;
  ce.L = L;
  ce.estimator = opt.estimator;
  ce.shift = opt.shift >= 0 ? opt.shift : std::min(N - 1, L / 2);
  if (ce.estimator == Estimator::window_shift && ce.shift < 1) ce.estimator = Estimator::threshold;
  if (ce.estimator == Estimator::window_shift && ce.shift >= N)
    throw Error(ErrorCode::InvalidArgument, "window shift must be below N");
  if (ce.estimator == Estimator::threshold) ce.shift = 0;

  auto bracket = [&](auto&& g, double& lo_out, double& hi_out) {
    double lo = f.min() - 1.0;
    double hi = f.max() + std::log(static_cast<double>(alphabet)) + 1.0;
    double step = hi - lo;
    int guard = 0;
    while (g(lo) < 0.0) {
      lo -= step;
      step *= 2.0;
      if (++guard > 60) throw Error(ErrorCode::NumericalFailure, "no lower bracket for the critical exponent");
    }
    step = hi - lo;
    guard = 0;
    while (g(hi) > 0.0) {
      hi += step;
      step *= 2.0;
      if (++guard > 60) throw Error(ErrorCode::NumericalFailure, "no upper bracket for the critical exponent");
    }
    while (hi - lo > opt.tol) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    lo_out = lo;
    hi_out = hi;
  };

  auto raw = [&](double s) {
    ++ce.evaluations;
    return log_value(s, N, L);
  };
  if (ce.estimator == Estimator::window_shift && opt.shift < 0) {
    // some subsets have empty approximations at certain depths (frequency windows that
    // contain no integer count); an automatic shift backs off until the shallow side is
    // nonempty, and the threshold form is the last resort
    const double probe = f.max() + std::log(static_cast<double>(alphabet));
    for (; ce.shift >= 1; --ce.shift) {
      try {
        ++ce.evaluations;
        log_value(probe, N - ce.shift, L - ce.shift);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyTarget) throw;
      }
    }
    if (ce.shift < 1) {
      ce.estimator = Estimator::threshold;
      ce.shift = 0;
    }
  }
  if (ce.estimator == Estimator::window_shift) {
    auto ratio = [&](double s) {
      ce.evaluations += 2;
      return log_value(s, N, L) - log_value(s, N - ce.shift, L - ce.shift);
    };
    bracket(ratio, ce.s_low, ce.s_high);
    if (opt.raw_diagnostic) bracket(raw, ce.raw_low, ce.raw_high);
  } else {
    bracket(raw, ce.s_low, ce.s_high);
    ce.raw_low = ce.s_low;
    ce.raw_high = ce.s_high;
  }
  return ce;
}

}  // namespace

CriticalExponent bowen_pressure(const Subshift& sft, const SubsetSpec& z,
                                const LocallyConstantPotential& f, Scale scale, int N, int L,
                                const SearchOptions& options) {
  return critical_exponent(
      [&](double s, int n0, int depth) { return log_min_cover_value(sft, z, f, s, n0, scale, depth); },
      f, sft.alphabet_size(), N, L, scale.m, options);
}

CriticalExponent weighted_pressure(const Subshift& sft, const SubsetSpec& k,
                                   const LocallyConstantPotential& f, Scale scale, int N, int L,
                                   const SearchOptions& options) {
  return critical_exponent(
      [&](double s, int n0, int depth) {
        return log_weighted_cover_value(sft, k, f, s, n0, scale, depth);
      },
      f, sft.alphabet_size(), N, L, scale.m, options);
}

bool cylinders_disjoint(std::span<const Symbol> u, std::span<const Symbol> v) {
  const std::size_t len = std::min(u.size(), v.size());
  return !std::equal(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(len), v.begin());
}

Word vitali_enlargement(const Ball& ball) {
  if (ball.scale.m < 3)
    throw Error(ErrorCode::ScaleTooCoarse, "5-fold enlargement needs m >= 3 on dyadic scales");
  const int len = ball.n + ball.scale.m - 3;
  return Word(ball.center.begin(), ball.center.begin() + len);
}

std::vector<std::size_t> vitali_select(const std::vector<Ball>& balls) {
  if (balls.empty()) return {};
  const int m = balls.front().scale.m;
  for (const auto& b : balls) {
    if (b.scale.m != m) throw Error(ErrorCode::InvalidArgument, "balls must share the scale");
    if (static_cast<int>(b.center.size()) != b.depth())
      throw Error(ErrorCode::InvalidArgument, "ball center must have length n + m");
  }
  if (m < 3) throw Error(ErrorCode::ScaleTooCoarse, "5-fold enlargement needs m >= 3 on dyadic scales");
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return balls[a].depth() < balls[b].depth(); });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool free = std::all_of(kept.begin(), kept.end(), [&](std::size_t j) {
      return cylinders_disjoint(balls[i].center, balls[j].center);
    });
    if (free) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

bool vitali_enlargements_cover(const std::vector<Ball>& balls,
                               const std::vector<std::size_t>& selected) {
  std::vector<Word> big;
  for (std::size_t j : selected) big.push_back(vitali_enlargement(balls.at(j)));
  return std::all_of(balls.begin(), balls.end(), [&](const Ball& b) {
    return std::any_of(big.begin(), big.end(), [&](const Word& e) {
      return e.size() <= b.center.size() && std::equal(e.begin(), e.end(), b.center.begin());
    });
  });
}

bool chain_precondition(double delta, int N) {
  if (!(delta > 0.0)) return false;
  // n^2 e^{-n delta} decreases once n > 2 / delta
  const int stop = std::max(N, static_cast<int>(std::ceil(2.0 / delta)) + 1);
  for (int n = N; n <= stop; ++n)
    if (2.0 * std::log(n) - n * delta > 0.0) return false;
  return true;
}

ChainReport check_chain(const Subshift& sft, const SubsetSpec& k, const LocallyConstantPotential& f,
                        double s, double delta, int N, Scale scale, int L) {
  if (scale.m < 3)
    throw Error(ErrorCode::ScaleTooCoarse, "the coarse scale m - 3 needs m >= 3");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  ChainReport r;
  r.s = s;
  r.delta = delta;
  r.N = N;
  r.m = scale.m;
  r.coarse_m = scale.m - 3;
  r.L = L > 0 ? L : N + scale.m + 4;
  r.precondition_holds = chain_precondition(delta, N);
  r.log_centered = log_centered_cover_value(sft, k, f, s + delta, N, Scale{r.coarse_m}, r.L);
  r.log_weighted = log_weighted_cover_value(sft, k, f, s, N, scale, r.L);
  r.log_unweighted = log_min_cover_value(sft, k, f, s, N, scale, r.L);
  r.centered = std::exp(r.log_centered);
  r.weighted = std::exp(r.log_weighted);
  r.unweighted = std::exp(r.log_unweighted);
  // the LP is solved to relative accuracy 1e-9
  r.lower_holds = r.log_centered <= r.log_weighted + 1e-9;
  r.upper_holds = r.log_weighted <= r.log_unweighted + 1e-9;
  return r;
}

}  // namespace pressurelab
