#include "wsheet/minkowski.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "wsheet/errors.hpp"

namespace wsheet {

MinkVector::MinkVector(Eigen::VectorXd coords) : c_(std::move(coords)) {}

MinkVector::MinkVector(std::initializer_list<double> coords) : c_(static_cast<Eigen::Index>(coords.size())) {
  Eigen::Index i = 0;
  for (double v : coords) c_[i++] = v;
}

MinkVector MinkVector::zero(int dim) { return MinkVector(Eigen::VectorXd::Zero(dim)); }

MinkVector MinkVector::basis(int dim, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[i] = 1.0;
  return MinkVector(std::move(e));
}

MinkVector& MinkVector::operator+=(const MinkVector& o) {
  if (o.dim() != dim()) throw InputError("MinkVector dimension mismatch");
  c_ += o.c_;
  return *this;
}

MinkVector& MinkVector::operator-=(const MinkVector& o) {
  if (o.dim() != dim()) throw InputError("MinkVector dimension mismatch");
  c_ -= o.c_;
  return *this;
}

MinkVector& MinkVector::operator*=(double a) {
  c_ *= a;
  return *this;
}

std::string MinkVector::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < dim(); ++i) os << (i ? ", " : "") << c_[i];
  os << ')';
  return os.str();
}

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Lightlike: return "lightlike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Zero: return "zero";
  }
  return "?";
}

double pseudo_product(const MinkVector& x, const MinkVector& y) {
  if (x.dim() != y.dim())
    throw InputError("pseudo_product: dimension mismatch (" + std::to_string(x.dim()) + " vs " +
                     std::to_string(y.dim()) + ")");
  double acc = -x[0] * y[0];
  for (int i = 1; i < x.dim(); ++i) acc += x[i] * y[i];
  return acc;
}

CausalClass causal_class(const MinkVector& x, double eps) {
  if (x.is_zero()) return CausalClass::Zero;
  const double q = pseudo_product(x, x);
  const double scale = std::max(1.0, x.coords().squaredNorm());
  if (std::abs(q) <= eps * scale) return CausalClass::Lightlike;
  return q > 0 ? CausalClass::Spacelike : CausalClass::Timelike;
}

double lorentz_norm(const MinkVector& x) { return std::sqrt(std::abs(pseudo_product(x, x))); }

double determinant(Eigen::MatrixXd m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw InputError("determinant: matrix not square");
  if (n == 0) return 1.0;
  double sign = 1.0;
  double prev = 1.0;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index r = k + 1; r < n; ++r)
      if (std::abs(m(r, k)) > std::abs(m(piv, k))) piv = r;
    if (m(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      m.row(k).swap(m.row(piv));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0.0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

MinkVector wedge(std::span<const MinkVector> xs) {
  if (xs.empty()) throw InputError("wedge: no vectors given");
  const int dim = xs.front().dim();
  const int n = dim - 1;
  if (static_cast<int>(xs.size()) != n)
    throw InputError("wedge: expected " + std::to_string(n) + " vectors in dimension " + std::to_string(dim) +
                     ", got " + std::to_string(xs.size()));
  Eigen::MatrixXd rows(n, dim);
  for (int r = 0; r < n; ++r) {
    if (xs[r].dim() != dim) throw InputError("wedge: dimension mismatch");
    rows.row(r) = xs[r].coords().transpose();
  }
  Eigen::VectorXd w(dim);
  Eigen::MatrixXd minor(n, n);
  for (int j = 0; j < dim; ++j) {
    for (int c = 0, mc = 0; c < dim; ++c) {
      if (c == j) continue;
      minor.col(mc++) = rows.col(c);
    }
    const double cofactor = ((j % 2) ? -1.0 : 1.0) * determinant(minor);
    // First-row entry is -e0 in column 0, e_j elsewhere.
    w[j] = (j == 0) ? -cofactor : cofactor;
  }
  return MinkVector(std::move(w));
}

MinkVector project_to_lightcone_sphere(const MinkVector& x, double eps) {
  if (x[0] == 0.0) throw DomainError("project_to_lightcone_sphere: x0 = 0 for " + x.str());
  if (causal_class(x, eps) != CausalClass::Lightlike)
    throw DomainError("project_to_lightcone_sphere: not lightlike: " + x.str());
  MinkVector out = x / x[0];
  out[0] = 1.0;
  return out;
}

LightlikeHyperplane::LightlikeHyperplane(MinkVector pseudo_normal, double offset, double eps)
    : normal_(std::move(pseudo_normal)), offset_(offset) {
  if (causal_class(normal_, eps) != CausalClass::Lightlike)
    throw DomainError("LightlikeHyperplane: pseudo normal is not lightlike: " + normal_.str());
}

double hyperplane_residual(const LightlikeHyperplane& h, const MinkVector& x) {
  return pseudo_product(x, h.pseudo_normal()) - h.offset();
}

Eigen::MatrixXd lorentz_metric(int dim) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
  g(0, 0) = -1.0;
  return g;
}

}  // namespace wsheet
