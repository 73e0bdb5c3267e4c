#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "nchardy/evaluate.hpp"
#include "nchardy/fock.hpp"
#include "nchardy/kernels.hpp"
#include "nchardy/linalg.hpp"
#include "nchardy/series.hpp"

namespace nchardy {

inline constexpr double kWanderingEigTol = 1e-8;
inline constexpr double kSubspaceRankTol = 1e-10;
inline const std::vector<double> kDefaultRadii{0.3, 0.5, 0.7, 0.9, 1.0};

// Subspace of the truncated Fock space (tensored with C^coefDim) given by an orthonormal frame.
struct Subspace {
  FockBasis basis;
  int coefDim = 1;
  CMatrix frame;
  int validDegree = 0;
  bool rInvariant = false;

  Index dim() const { return frame.cols(); }
};

Subspace range_closure(const Series& h, int n);

// M minus the right shifts of the part of M that stays below the top degree.
Subspace wandering_subspace(const Subspace& m, double eigTol = kWanderingEigTol);

// Frame columns as p x 1 series placed side by side (p x m).
Series frame_to_row(const Subspace& w);

// Adjoint action Omega(L)^* H on coefficients, truncated at the smaller max degree.
Series adjoint_apply(const Series& omega, const Series& h);

// Isometry defect of f(L) on the columns e_alpha, |alpha| <= window, using every stored
// coefficient; for a truncated non-polynomial series the unseen tail shows up in the defect.
double series_isometry_defect(const Series& f, int window);

// u_sigma = sum_gamma f_gamma^* f_{gamma sigma} over the stored coefficients.
std::map<Word, CMatrix, DegLex> autocorrelation(const Series& f);

// Largest entry of the difference of the autocorrelations of g and f. For g = Theta f with f
// polynomial and outer, this vanishes exactly when Theta is inner.
double symbol_defect(const Series& g, const Series& f);

struct SpectralFactor {
  Series inner;
  Series outer;
  bool converged = false;
  int iterations = 0;
  double fixedPointResidual = 0;
  double minSchur = 0;
};

// Inner-outer factorization of a polynomial H bounded below, from the Schur-complement fixed
// point Y = sum_k R_k Y R_k^* + b s^{-1} b^* for the Toeplitz operator H(L)^* H(L).
SpectralFactor spectral_factor(const Series& h, int n, int maxIterations = 200000);

struct FactorDefects {
  double innerDefect = 0;
  // Windowed Gram defect of the stored inner coefficients; includes the unseen tail.
  double truncatedInnerDefect = 0;
  double outerDefect = 0;
  double reconstructionError = 0;
};

struct FactorizationResult {
  Series inner;
  Series outer;
  int wanderingDim = 0;
  FactorDefects defects;
  int validDegree = 0;
  std::string method;
};

// Scale column j of the inner factor so its first nonzero coefficient is real positive; the
// outer factor absorbs the phase.
void normalize_phase(Series& inner, Series& outer);

FactorizationResult inner_outer(const Series& h, int n);

double outer_defect(const Series& h, int n);

struct VacuumSolve {
  double residual = 0;
  double solutionNorm = 0;
};

VacuumSolve solve_vacuum_report(const Series& f, double r, int n);
double solve_vacuum(const Series& f, double r, int n);

double blaschke_defect(const Series& theta, const std::vector<SingularityPair>& pairs, int n);

struct SingularReport {
  bool singular = false;
  double constantSigma = 0;
  double minSampleSigma = 0;
  double sampleTailBound = 0;
  std::vector<std::pair<double, double>> radiusSigma;
  int samples = 0;
};

inline constexpr double kSingularTol = 1e-12;

SingularReport singular_test(const Series& s, const std::vector<NcPoint>& samples, double tol = kSingularTol);

// Random points with levels in [1, maxLevel] and row norm drawn up to maxRowNorm.
std::vector<NcPoint> random_points(int d, int count, int maxLevel, double maxRowNorm, std::mt19937_64& rng);

struct SplitResult {
  Series B;
  Series S;
  int wanderingDim = 0;
  bool samplingInsufficient = false;
  double reconstructionError = 0;
  double sInnerDefect = 0;
  // Blaschke defect of B, and of Theta itself against the same pairs.
  double blaschkeDefect = 0;
  double thetaBlaschkeDefect = 0;
  int validDegree = 0;
  SingularReport singular;
  std::string method;
};

SplitResult blaschke_singular_split(const Series& theta, const std::vector<SingularityPair>& pairs, int n,
                                    const std::vector<NcPoint>& samples = {}, double singularTol = kSingularTol);

struct BsoResult {
  Series B;
  Series S;
  Series F;
  FactorizationResult innerOuter;
  SplitResult split;
  double reconstructionError = 0;
};

BsoResult bso_factor(const Series& h, int n, const std::vector<SingularityPair>& pairs = {},
                     const std::vector<NcPoint>& samples = {}, double singularTol = kSingularTol);

int wandering_dimension(const Series& h, double r, int n);

}  // namespace nchardy
