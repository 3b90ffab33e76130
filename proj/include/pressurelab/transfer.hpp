#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pressurelab/matrix.hpp"
#include "pressurelab/symbolic.hpp"

namespace pressurelab {

enum class PressureMethod { spectral, capacity, bowen, weighted, measure };
std::string_view to_string(PressureMethod method);

/// A pressure estimate together with a rigorous or declared bracket.
struct PressureValue {
  double value = 0.0;
  PressureMethod method = PressureMethod::spectral;
  double tolerance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// L_ab = A_ab exp(f(ab)), or A_ab exp(f(a)) for a depth-1 potential.
struct TransferMatrix {
  Matrix entries;
  int potential_depth = 1;
};

/// Requires depth(f) <= 2; deeper potentials go through recode_to_blocks first.
TransferMatrix build_transfer_matrix(const LocallyConstantPotential& f);

struct PerronData {
  double lambda = 0.0;
  double log_lower = 0.0;  // Collatz-Wielandt bracket on log(lambda)
  double log_upper = 0.0;
  std::vector<double> right;
  std::vector<double> left;
};

/// Perron root and eigenvectors of an irreducible nonnegative matrix.
PerronData perron_frobenius(const Matrix& m, double tol = 1e-12);

PressureValue spectral_pressure(const TransferMatrix& transfer, double tol = 1e-12);
/// Recodes deeper potentials automatically.
PressureValue spectral_pressure(const LocallyConstantPotential& f, double tol = 1e-12);

/// Markov measure: row-stochastic transition matrix and initial distribution.
struct MarkovMeasure {
  Matrix transition;
  std::vector<double> initial;
  std::string label;

  int alphabet_size() const { return static_cast<int>(initial.size()); }
  bool is_invariant(double tol = 1e-9) const;

  static MarkovMeasure bernoulli(const std::vector<double>& p, std::string label = "bernoulli");
  /// Uses the stationary vector of `transition` as the initial distribution.
  static MarkovMeasure stationary(Matrix transition, std::string label = "markov");
  static MarkovMeasure point_mass(int alphabet_size, Symbol fixed, std::string label = "point-mass");
};

/// Unique stationary vector of an irreducible stochastic matrix on the symbols it visits.
std::vector<double> stationary_distribution(const Matrix& transition);

MarkovMeasure equilibrium_measure(const LocallyConstantPotential& f, double tol = 1e-12);

/// mu([w]); 0 when w leaves the support.
double cylinder_measure(const MarkovMeasure& mu, std::span<const Symbol> w);

struct GibbsBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of mu([w]) / exp(-|w| P + sup f_|w| on [w]) over admissible 1 <= |w| <= max_len.
GibbsBounds gibbs_ratio_bounds(const MarkovMeasure& mu, const LocallyConstantPotential& f,
                               double pressure, int max_len);

}  // namespace pressurelab
