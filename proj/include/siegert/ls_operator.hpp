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

#pragma once

// Nystrom discretization of the Lippmann-Schwinger operator on the quadrature
// nodes of the support, with singularity subtraction for the log kernel.

#include <Eigen/Dense>
#include <memory>

#include "siegert/channels.hpp"
#include "siegert/green.hpp"
#include "siegert/structure.hpp"

namespace siegert {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct OperatorMatrix {
  SpectralPoint p;
  double h = 0.0;
  std::shared_ptr<const QuadratureDomain> quad;
  CMat A;                   // A_ij = c_j H(r_i - r_j), c_j = w_j (eps_j - 1)
  double hs_norm = 0.0;     // discrete Hilbert-Schmidt norm of the kernel

  Eigen::Index size() const { return A.rows(); }
};

OperatorMatrix assemble(const StructureSpec& s, double h, const SpectralPoint& p,
                        std::shared_ptr<const QuadratureDomain> q);

CVec apply(const OperatorMatrix& op, const CVec& field);

// Solves (I - A) E = rhs. Throws NearSingular (message carries sigma_min).
CVec resolvent_solve(const OperatorMatrix& op, const CVec& rhs);

double smallest_singular_value(const CMat& M);

// <f, g> = sum_j w_j conj(f_j) g_j
cplx inner(const QuadratureDomain& q, const CVec& f, const CVec& g);
double weighted_norm(const QuadratureDomain& q, const CVec& f);

struct EigenPairNearOne {
  cplx lambda0;
  CVec right;        // unit Euclidean norm
  CVec left;         // A^H left = conj(lambda0) left, unit Euclidean norm
  double gap = 0.0;  // distance from lambda0 to the next eigenvalue
  double residual_right = 0.0;
  double residual_left = 0.0;
};

EigenPairNearOne eigen_near_one(const OperatorMatrix& op, double delta);

// Eigenvalue of A nearest to `shift` with its right/left vectors, by two-sided
// Rayleigh quotient iteration started from the given vectors.
EigenPairNearOne track_eigenpair(const OperatorMatrix& op, cplx shift, const CVec& right0,
                                 const CVec& left0, int iterations = 6);

struct RieszProjection {
  CMat P;
  double delta = 0.0;
  int rank_estimate = 0;
  double idempotency = 0.0;  // ||P^2 - P|| / ||P||
};

RieszProjection riesz_projection(const OperatorMatrix& op, double delta, int n_quad = 32);

cplx lambda0_formula(const OperatorMatrix& op, const RieszProjection& P, const CVec& E_ref);

// d lambda0 / d kappa by a five-point matrix difference along real kappa
// (step rel_step * |kappa|), projected with the left/right eigenvectors.
cplx d_lambda_d_kappa(const StructureSpec& s, const OperatorMatrix& op, const EigenPairNearOne& e,
                      double rel_step = 1e-4);

// Continuous Nystrom interpolant at an arbitrary point:
//   E(r) [1 + sum_j c_j S(r - r_j) - I_S(r)] = sum_j c_j H(r - r_j) E_j + incident.
// Points are first reduced by Bloch periodicity to the cell around the nodes.
class FieldInterpolant {
 public:
  FieldInterpolant(const SpectralPoint& p, std::shared_ptr<const QuadratureDomain> q,
                   const CVec& nodal);
  // `incident` is the incident wave at (x, z) (zero for Siegert states).
  cplx operator()(double x, double z, cplx incident = 0.0) const;

 private:
  SpectralPoint p_;
  std::shared_ptr<const QuadratureDomain> q_;
  CVec cE_;
  double x_center_ = 0.5;
  std::shared_ptr<const Kernel> kernel_;
};

}  // namespace siegert
