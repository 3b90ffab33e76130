#include "pressurelab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pressurelab/error.hpp"

namespace pressurelab {

std::string_view to_string(PressureMethod method) {
  switch (method) {
    case PressureMethod::spectral: return "spectral";
    case PressureMethod::capacity: return "capacity";
    case PressureMethod::bowen: return "bowen";
    case PressureMethod::weighted: return "weighted";
    case PressureMethod::measure: return "measure";
  }
  return "unknown";
}

TransferMatrix build_transfer_matrix(const LocallyConstantPotential& f) {
  const Subshift& sft = f.system();
  if (f.depth() > 2)
    throw Error(ErrorCode::InvalidArgument, "transfer matrix needs depth <= 2; recode first");
  const int a = sft.alphabet_size();
  TransferMatrix t{Matrix(static_cast<std::size_t>(a), static_cast<std::size_t>(a)), f.depth()};
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < a; ++y) {
      if (!sft.allowed(x, y)) continue;
      const Symbol w[2] = {static_cast<Symbol>(x), static_cast<Symbol>(y)};
      t.entries(x, y) = std::exp(f.depth() == 1 ? f(std::span(w, 1)) : f(w));
    }
  return t;
}

namespace {

bool support_irreducible(const Matrix& m) {
  TransitionRelation rel(static_cast<int>(m.rows()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) > 0.0) rel.set(static_cast<int>(i), static_cast<int>(j));
  return rel.is_irreducible();
}

// Power iteration on (M + cI); returns the positive vector and the CW bracket of M.
std::vector<double> perron_vector(const Matrix& m, double tol, double& lo, double& hi) {
  const std::size_t n = m.rows();
  double max_row = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += m(i, j);
    max_row = std::max(max_row, r);
  }
  const double shift = 0.1 * max_row;
  std::vector<double> x(n, 1.0), y(n);
  for (int iter = 0; iter < 1000000; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
      y[i] = s;
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (lo > 0.0 && std::log(hi) - std::log(lo) <= tol) return x;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = y[i] + shift * x[i];
      norm = std::max(norm, x[i]);
    }
    for (double& v : x) v /= norm;
  }
  throw Error(ErrorCode::NumericalFailure, "power iteration did not converge");
}

}  // namespace

PerronData perron_frobenius(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "Perron data needs a nonempty square matrix");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(m(i, j) >= 0.0) || !std::isfinite(m(i, j)))
        throw Error(ErrorCode::InvalidArgument, "matrix entries must be finite and nonnegative");
  if (!support_irreducible(m))
    throw Error(ErrorCode::ReducibleSystem, "matrix is reducible; restrict to a component");
  PerronData out;
  double lo = 0.0, hi = 0.0, tlo = 0.0, thi = 0.0;
  out.right = perron_vector(m, tol, lo, hi);
  out.left = perron_vector(m.transposed(), tol, tlo, thi);
  lo = std::max(lo, tlo);
  hi = std::min(hi, thi);
  out.log_lower = std::log(lo);
  out.log_upper = std::log(hi);
  out.lambda = std::sqrt(lo * hi);
  return out;
}

PressureValue spectral_pressure(const TransferMatrix& transfer, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const PerronData pf = perron_frobenius(transfer.entries, tol);
  PressureValue v;
  v.method = PressureMethod::spectral;
  v.lower = pf.log_lower;
  v.upper = pf.log_upper;
  v.value = 0.5 * (v.lower + v.upper);
  v.tolerance = std::max(tol, v.upper - v.lower);
  return v;
}

PressureValue spectral_pressure(const LocallyConstantPotential& f, double tol) {
  const BlockRecoding rec = recode_to_blocks(f);
  return spectral_pressure(build_transfer_matrix(rec.potential), tol);
}

bool MarkovMeasure::is_invariant(double tol) const {
  const std::size_t n = initial.size();
  for (std::size_t b = 0; b < n; ++b) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += initial[a] * transition(a, b);
    if (std::abs(s - initial[b]) > tol) return false;
  }
  return true;
}

MarkovMeasure MarkovMeasure::bernoulli(const std::vector<double>& p, std::string label) {
  const std::size_t n = p.size();
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (n == 0 || std::abs(total - 1.0) > 1e-12 ||
      std::any_of(p.begin(), p.end(), [](double v) { return !(v >= 0.0); }))
    throw Error(ErrorCode::InvalidArgument, "Bernoulli weights must form a probability vector");
  Matrix t(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t(a, b) = p[b];
  return MarkovMeasure{std::move(t), p, std::move(label)};
}

MarkovMeasure MarkovMeasure::stationary(Matrix transition, std::string label) {
  auto pi = stationary_distribution(transition);
  return MarkovMeasure{std::move(transition), std::move(pi), std::move(label)};
}

MarkovMeasure MarkovMeasure::point_mass(int alphabet_size, Symbol fixed, std::string label) {
  const auto n = static_cast<std::size_t>(alphabet_size);
  Matrix t(n, n);
  for (std::size_t a = 0; a < n; ++a) t(a, fixed) = 1.0;
  std::vector<double> init(n, 0.0);
  init.at(fixed) = 1.0;
  return MarkovMeasure{std::move(t), std::move(init), std::move(label)};
}

std::vector<double> stationary_distribution(const Matrix& transition) {
  const std::size_t n = transition.rows();
  if (n == 0 || transition.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "transition matrix must be square");
  for (std::size_t a = 0; a < n; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < n; ++b) s += transition(a, b);
    if (std::abs(s - 1.0) > 1e-9)
      throw Error(ErrorCode::InvalidArgument, "transition rows must sum to 1");
  }
  // (P^T - I) pi = 0 with one equation replaced by sum(pi) = 1
  Matrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = transition(j, i) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  a(n - 1, n) = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-13)
      throw Error(ErrorCode::ReducibleSystem, "stationary distribution is not unique");
    if (piv != col)
      for (std::size_t j = 0; j <= n; ++j) std::swap(a(piv, j), a(col, j));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0.0) continue;
      const double factor = a(r, col) / a(col, col);
      for (std::size_t j = col; j <= n; ++j) a(r, j) -= factor * a(col, j);
    }
  }
  std::vector<double> pi(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pi[i] = std::max(0.0, a(i, n) / a(i, i));
    total += pi[i];
  }
  for (double& v : pi) v /= total;
  return pi;
}

MarkovMeasure equilibrium_measure(const LocallyConstantPotential& f, double tol) {
  if (f.depth() > 2)
    throw Error(ErrorCode::InvalidArgument, "equilibrium measure is Markov only for depth <= 2");
  const TransferMatrix t = build_transfer_matrix(f);
  const PerronData pf = perron_frobenius(t.entries, tol);
  const std::size_t n = t.entries.rows();
  Matrix p(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      p(a, b) = t.entries(a, b) * pf.right[b] / (pf.lambda * pf.right[a]);
      row += p(a, b);
    }
    for (std::size_t b = 0; b < n; ++b) p(a, b) /= row;
  }
  return MarkovMeasure::stationary(std::move(p), "equilibrium(" + f.system().label() + ")");
}

double cylinder_measure(const MarkovMeasure& mu, std::span<const Symbol> w) {
  if (w.empty()) return 1.0;
  const auto n = static_cast<std::size_t>(mu.alphabet_size());
  if (w[0] >= n) return 0.0;
  double m = mu.initial[w[0]];
  for (std::size_t i = 1; i < w.size() && m > 0.0; ++i) {
    if (w[i] >= n) return 0.0;
    m *= mu.transition(w[i - 1], w[i]);
  }
  return m;
}

GibbsBounds gibbs_ratio_bounds(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                               double pressure, int max_len) {
  if (max_len < f.depth())
    throw Error(ErrorCode::InvalidArgument, "max_len must be at least the potential depth");
  GibbsBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (int len = 1; len <= max_len; ++len) {
    for_each_word(f.system(), len, [&](const Word& w) {
      const double r = cylinder_measure(mu, w) /
                       std::exp(-len * pressure + sup_birkhoff_on_cylinder(f, w, len));
      out.min = std::min(out.min, r);
      out.max = std::max(out.max, r);
    });
  }
  return out;
}

}  // namespace pressurelab
