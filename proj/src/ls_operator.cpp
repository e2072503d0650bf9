// Copyright 2026 The siegert Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "siegert/ls_operator.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "siegert/error.hpp"
#include "siegert/green.hpp"

namespace siegert {
namespace {

// sum over parts of contrast * (-kappa / 2pi) * int ln|r - r'| dA'
cplx log_correction(const QuadratureDomain& q, cplx kappa, double x, double z) {
  double s = 0.0;
  for (const Inclusion& part : q.parts) s += (part.eps - 1.0) * log_potential(part, x, z);
  return -kappa * s / kTwoPi;
}

void check_size(const OperatorMatrix& op, const CVec& v) {
  if (v.size() != op.size())
    throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(v.size()) +
                                                  " does not match operator size " +
                                                  std::to_string(op.size()));
}

}  // namespace

OperatorMatrix assemble(const StructureSpec& s, double h, const SpectralPoint& p,
                        std::shared_ptr<const QuadratureDomain> q) {
  if (!s.in_range(h)) throw Error(ErrorCode::OutOfRange, "h outside the coupling range");
  const auto& nodes = q->nodes;
  const int n = int(nodes.size());
  OperatorMatrix op;
  op.p = p;
  op.h = h;
  op.quad = q;
  op.A = CMat::Zero(n, n);
  if (n == 0) return op;
  const Kernel K(p);
  const cplx reg0 = K.regular(0.0, 0.0);
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = nodes[j].w * nodes[j].contrast;
  CMat& A = op.A;

  // Node sets are mirror symmetric, so many pairs share (|dx|, |dz|). Collect
  // distinct separations serially (first-occurrence order), evaluate them in
  // parallel, then scatter; the result does not depend on the thread count.
  struct Key {
    long long ax, az;
    bool operator==(const Key& o) const { return ax == o.ax && az == o.az; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.ax * 1000003LL) ^ std::hash<long long>()(k.az);
    }
  };
  std::unordered_map<Key, int, KeyHash> index;
  std::vector<std::array<double, 2>> seps;
  std::vector<int> slot(std::size_t(n) * (n - 1) / 2);
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pos) {
      const double ax = std::abs(nodes[i].x - nodes[j].x);
      const double az = std::abs(nodes[i].z - nodes[j].z);
      const Key key{std::llround(ax * 1e12), std::llround(az * 1e12)};
      auto [it, fresh] = index.emplace(key, int(seps.size()));
      if (fresh) seps.push_back({ax, az});
      slot[pos] = it->second;
    }
  }
  std::vector<std::array<cplx, 2>> vals(seps.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int u = 0; u < int(seps.size()); ++u) vals[u] = K.value_pair(seps[u][0], seps[u][1]);
  pos = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pos) {
      // vals = {H(|dx|, dz), H(-|dx|, dz)}
      const auto& v = vals[slot[pos]];
      const bool pos_dx = nodes[i].x - nodes[j].x >= 0.0;
      A(i, j) = c[j] * (pos_dx ? v[0] : v[1]);
      A(j, i) = c[i] * (pos_dx ? v[1] : v[0]);
    }
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    cplx sub = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double rho = std::hypot(nodes[i].x - nodes[j].x, nodes[i].z - nodes[j].z);
      sub += c[j] * green_log_part(p.kappa, rho);
    }
    A(i, i) = c[i] * reg0 + log_correction(*q, p.kappa, nodes[i].x, nodes[i].z) - sub;
  }
  double hs = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) hs += std::norm(A(i, j)) * nodes[i].w / nodes[j].w;
  op.hs_norm = std::sqrt(hs);
  return op;
}

CVec apply(const OperatorMatrix& op, const CVec& field) {
  check_size(op, field);
  return op.A * field;
}

double smallest_singular_value(const CMat& M) {
  if (M.rows() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

CVec resolvent_solve(const OperatorMatrix& op, const CVec& rhs) {
  check_size(op, rhs);
  if (op.size() == 0) return rhs;
  const CMat M = CMat::Identity(op.size(), op.size()) - op.A;
  Eigen::PartialPivLU<CMat> lu(M);
  CVec E = lu.solve(rhs);
  // One step of iterative refinement.
  E += lu.solve(rhs - M * E);
  const double res = (M * E - rhs).norm();
  if (!(res <= 1e-10 * rhs.norm()) || lu.rcond() < 1e-14) {
    const double smin = smallest_singular_value(M);
    throw Error(ErrorCode::NearSingular,
                "I - A is numerically singular (sigma_min = " + std::to_string(smin) + ")");
  }
  return E;
}

cplx inner(const QuadratureDomain& q, const CVec& f, const CVec& g) {
  cplx s = 0.0;
  for (Eigen::Index j = 0; j < f.size(); ++j) s += q.nodes[j].w * std::conj(f(j)) * g(j);
  return s;
}

double weighted_norm(const QuadratureDomain& q, const CVec& f) {
  return std::sqrt(inner(q, f, f).real());
}

EigenPairNearOne eigen_near_one(const OperatorMatrix& op, double delta) {
  const Eigen::Index n = op.size();
  if (n == 0) throw Error(ErrorCode::NoneInDisk, "empty operator has no eigenvalues");
  Eigen::ComplexEigenSolver<CMat> es(op.A, true);
  const auto& ev = es.eigenvalues();
  int k = -1, count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(ev(i) - 1.0) <= delta) {
      ++count;
      if (k < 0 || std::abs(ev(i) - 1.0) < std::abs(ev(k) - 1.0)) k = int(i);
    }
  }
  if (count == 0) throw Error(ErrorCode::NoneInDisk, "no eigenvalue within delta of 1");
  if (count > 1)
    throw Error(ErrorCode::MultipleInDisk,
                std::to_string(count) + " eigenvalues within delta of 1");
  EigenPairNearOne out;
  out.lambda0 = ev(k);
  // Polish both vectors by inverse iteration at the computed eigenvalue.
  out = track_eigenpair(op, out.lambda0, es.eigenvectors().col(k),
                        CVec::Ones(n).normalized(), 2);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != k) gap = std::min(gap, std::abs(ev(i) - out.lambda0));
  out.gap = gap;
  return out;
}

EigenPairNearOne track_eigenpair(const OperatorMatrix& op, cplx shift, const CVec& right0,
                                 const CVec& left0, int iterations) {
  const Eigen::Index n = op.size();
  const CMat I = CMat::Identity(n, n);
  CVec v = right0.normalized();
  CVec w = left0.normalized();
  cplx sigma = shift;
  for (int it = 0; it < iterations; ++it) {
    // Keep the shift off the exact eigenvalue so the factorization stays finite.
    const cplx s = sigma + 1e-13 * std::max(1.0, std::abs(sigma));
    Eigen::PartialPivLU<CMat> lu(op.A - s * I);
    CVec v1 = lu.solve(v);
    CVec w1 = lu.adjoint().solve(w);
    v = v1.normalized();
    w = w1.normalized();
    const cplx den = w.dot(v);
    if (std::abs(den) < 1e-300) break;
    const cplx next = w.dot(op.A * v) / den;
    const bool done = std::abs(next - sigma) <= 1e-15 * std::max(1.0, std::abs(next));
    sigma = next;
    if (done && it >= 1) break;
  }
  EigenPairNearOne out;
  out.lambda0 = sigma;
  out.right = v;
  out.left = w;
  out.residual_right = (op.A * v - sigma * v).norm();
  out.residual_left = (op.A.adjoint() * w - std::conj(sigma) * w).norm();
  out.gap = 0.0;
  return out;
}

RieszProjection riesz_projection(const OperatorMatrix& op, double delta, int n_quad) {
  const Eigen::Index n = op.size();
  const CMat I = CMat::Identity(n, n);
  RieszProjection out;
  out.delta = delta;
  out.P = CMat::Zero(n, n);
  for (int k = 0; k < n_quad; ++k) {
    const cplx e = std::polar(1.0, kTwoPi * (k + 0.5) / n_quad);
    const cplx lam = 1.0 + delta * e;
    Eigen::PartialPivLU<CMat> lu(lam * I - op.A);
    if (lu.rcond() < 1e-13)
      throw Error(ErrorCode::ContourHitsEigenvalue, "eigenvalue on the projection contour");
    out.P += (delta * e / double(n_quad)) * lu.inverse();
  }
  const double pn = out.P.norm();
  out.idempotency = pn > 0.0 ? (out.P * out.P - out.P).norm() / pn : 0.0;
  out.rank_estimate = int(std::lround(out.P.trace().real()));
  return out;
}

cplx lambda0_formula(const OperatorMatrix& op, const RieszProjection& P, const CVec& E_ref) {
  check_size(op, E_ref);
  const QuadratureDomain& q = *op.quad;
  const CVec PE = P.P * E_ref;
  const cplx den = inner(q, E_ref, PE);
  const double scale = weighted_norm(q, E_ref) * weighted_norm(q, PE);
  if (!(std::abs(den) > 1e-12 * scale))
    throw Error(ErrorCode::DegenerateProjection, "<E, P E> vanishes");
  return inner(q, E_ref, op.A * PE) / den;
}

cplx d_lambda_d_kappa(const StructureSpec& s, const OperatorMatrix& op, const EigenPairNearOne& e,
                      double rel_step) {
  const double d = rel_step * std::abs(op.p.kappa);
  auto at = [&](double t) {
    SpectralPoint p = op.p;
    p.kappa += t * d;
    return assemble(s, op.h, p, op.quad).A;
  };
  const CMat dA = (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * d);
  return e.left.dot(dA * e.right) / e.left.dot(e.right);
}

FieldInterpolant::FieldInterpolant(const SpectralPoint& p,
                                   std::shared_ptr<const QuadratureDomain> q, const CVec& nodal)
    : p_(p), q_(std::move(q)), kernel_(std::make_shared<Kernel>(p)) {
  const auto& nodes = q_->nodes;
  cE_.resize(Eigen::Index(nodes.size()));
  double xs = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    cE_(Eigen::Index(j)) = nodes[j].w * nodes[j].contrast * nodal(Eigen::Index(j));
    xs += nodes[j].x;
  }
  if (!nodes.empty()) x_center_ = xs / double(nodes.size());
}

cplx FieldInterpolant::operator()(double x, double z, cplx incident) const {
  const double shift = std::floor(x - x_center_ + 0.5);
  const double xr = x - shift;
  const auto& nodes = q_->nodes;
  cplx num = 0.0, sub = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double dx = xr - nodes[j].x, dz = z - nodes[j].z;
    const double rho = std::hypot(dx, dz);
    if (rho < 1e-14) {
      // On a node: the interpolant reproduces the nodal value.
      return cE_(Eigen::Index(j)) / (nodes[j].w * nodes[j].contrast) *
             std::polar(1.0, shift * p_.kx);
    }
    num += cE_(Eigen::Index(j)) * kernel_->value(dx, dz);
    sub += nodes[j].w * nodes[j].contrast * green_log_part(p_.kappa, rho);
  }
  // The log-subtraction correction is applied inside the inclusions only, so
  // that outside the field is exactly the discrete source sum (and agrees with
  // its plane-wave expansion).
  bool inside = false;
  for (const Inclusion& part : q_->parts)
    for (double img : {0.0, -1.0, 1.0}) inside = inside || part.contains(xr + img, z);
  const cplx den = inside ? 1.0 + sub - log_correction(*q_, p_.kappa, xr, z) : cplx(1.0);
  return (std::polar(1.0, shift * p_.kx) * num + incident) / den;
}

}  // namespace siegert
