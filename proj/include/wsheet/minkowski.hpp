#pragma once

// Lorentz-Minkowski space R^{n+1}_1 with pairing <x,y> = -x0*y0 + sum_i xi*yi.

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wsheet {

class MinkVector {
 public:
  MinkVector() = default;
  explicit MinkVector(Eigen::VectorXd coords);
  MinkVector(std::initializer_list<double> coords);

  static MinkVector zero(int dim);
  /// Canonical basis vector e_i (index 0 is the time axis).
  static MinkVector basis(int dim, int i);

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const Eigen::VectorXd& coords() const { return c_; }
  /// Spatial part (x1..xn).
  Eigen::VectorXd spatial() const { return c_.tail(c_.size() - 1); }
  bool is_zero() const { return c_.isZero(0.0); }

  MinkVector& operator+=(const MinkVector& o);
  MinkVector& operator-=(const MinkVector& o);
  MinkVector& operator*=(double a);
  MinkVector& operator/=(double a) { return *this *= 1.0 / a; }

  friend MinkVector operator+(MinkVector a, const MinkVector& b) { return a += b; }
  friend MinkVector operator-(MinkVector a, const MinkVector& b) { return a -= b; }
  friend MinkVector operator*(double a, MinkVector v) { return v *= a; }
  friend MinkVector operator*(MinkVector v, double a) { return v *= a; }
  friend MinkVector operator/(MinkVector v, double a) { return v *= 1.0 / a; }
  friend MinkVector operator-(MinkVector v) { return v *= -1.0; }
  friend bool operator==(const MinkVector& a, const MinkVector& b) { return a.c_ == b.c_; }

  std::string str() const;

 private:
  Eigen::VectorXd c_;
};

enum class CausalClass { Spacelike, Lightlike, Timelike, Zero };

const char* to_string(CausalClass c);

/// Default relative band for deciding <x,x> == 0.
inline constexpr double kLightlikeEps = 1e-9;

double pseudo_product(const MinkVector& x, const MinkVector& y);

/// Lightlike iff |<x,x>| <= eps * max(1, sum x_i^2).
CausalClass causal_class(const MinkVector& x, double eps = kLightlikeEps);

/// sqrt(|<x,x>|)
double lorentz_norm(const MinkVector& x);

/// x1 ^ ... ^ xn: the cofactor expansion of the determinant whose first row is
/// (-e0, e1, ..., en). Satisfies <x, x1^...^xn> = det(x, x1, ..., xn).
MinkVector wedge(std::span<const MinkVector> xs);

/// pi^L_S: (x0, x1, ..., xn) -> (1, x1/x0, ..., xn/x0) for lightlike x with x0 != 0.
MinkVector project_to_lightcone_sphere(const MinkVector& x, double eps = kLightlikeEps);

/// HP(v, c) = { x : <x, v> = c } with v lightlike.
class LightlikeHyperplane {
 public:
  LightlikeHyperplane(MinkVector pseudo_normal, double offset, double eps = kLightlikeEps);

  const MinkVector& pseudo_normal() const { return normal_; }
  double offset() const { return offset_; }

 private:
  MinkVector normal_;
  double offset_;
};

/// <x, v> - c; zero iff x lies on the hyperplane.
double hyperplane_residual(const LightlikeHyperplane& h, const MinkVector& x);

/// Determinant by fraction-free (Bareiss) elimination with partial pivoting.
double determinant(Eigen::MatrixXd m);

/// Lorentz metric diag(-1, 1, ..., 1) of the given dimension.
Eigen::MatrixXd lorentz_metric(int dim);

}  // namespace wsheet
