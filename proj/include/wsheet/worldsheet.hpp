#pragma once

// A world sheet X : U x I -> R^{n+1}_1, U in R^s, given by one expression per
// ambient coordinate in the chart variables (u1, ..., us, t).

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wsheet/expr.hpp"
#include "wsheet/minkowski.hpp"

namespace wsheet {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// One sampling axis. Closed axes include both ends; periodic axes sample
/// [lo, hi) and wrap when taking neighbours.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 33;
  bool periodic = false;

  double step() const;
  double value(int i) const;
};

/// Flat index <-> multi-index over a list of axes (first axis varies slowest).
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<int> counts);

  std::size_t size() const { return size_; }
  int rank() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& counts() const { return counts_; }
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> idx) const;

 private:
  std::vector<int> counts_;
  std::size_t size_ = 0;
};

struct WorldSheetSpec {
  int ambient_dim = 3;  // n + 1
  int s = 1;            // dimension of the momentary spaces S_t
  int k = 2;            // s + k = n + 1
  std::vector<std::string> coord_text;
  std::vector<ExprNode> coords;
  std::vector<Interval> u_domain;
  std::vector<bool> u_periodic;
  Interval t_domain;

  /// Parses and checks dimensions. Chart names are u1..us, t.
  static WorldSheetSpec from_strings(int ambient_dim, int s, int k, std::vector<std::string> coord_text,
                                     std::vector<Interval> u_domain, Interval t_domain,
                                     std::vector<bool> u_periodic = {});

  int n() const { return ambient_dim - 1; }
  std::vector<std::string> chart() const;
  bool contains(std::span<const double> u, double t, double slack = 1e-12) const;
};

/// Everything the geometry needs at one chart point.
struct PointEval {
  std::vector<double> u;
  double t = 0.0;
  MinkVector position;
  MinkVector Xt;
  std::vector<MinkVector> Xu;                // s vectors
  std::vector<std::vector<MinkVector>> Xuu;  // s x s, symmetric
  Eigen::MatrixXd g;                         // <Xu_i, Xu_j>
  Eigen::MatrixXd g_inv;
  double det_g = 0.0;
};

enum class DomainCheck { Enforce, Skip };

/// Evaluates X and its derivatives. Throws DomainError outside the domain box,
/// EvalError from the expressions and DegeneracyError when det g is not positive.
PointEval evaluate(const WorldSheetSpec& spec, std::span<const double> u, double t,
                   DomainCheck check = DomainCheck::Enforce);

struct Violation {
  std::vector<double> u;
  double t = 0.0;
  std::string check;  // "spacelike_slice", "timelike_sheet", "immersion", "evaluation"
  std::string detail;
};

struct ValidationReport {
  std::size_t points = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  double signature_tol = 1e-9;  // relative to the Gram matrix norm
  double rank_tol = 1e-9;       // relative to the largest singular value
};

/// Samples the grid axes (u1..us then t) and checks at each point that the
/// slice metric is positive definite, that Gram(Xt, Xu) has Lorentz signature
/// and that (Xt, Xu) has full rank s + 1.
ValidationReport validate(const WorldSheetSpec& spec, std::span<const GridAxis> axes,
                          const ValidationOptions& opts = {});

/// Axes covering the sheet's domain box with the given counts (u1..us, t).
std::vector<GridAxis> domain_axes(const WorldSheetSpec& spec, std::span<const int> counts);

/// Numerical rank: singular values above rel_tol * sigma_max (and above abs_floor).
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double abs_floor = 0.0);

}  // namespace wsheet
