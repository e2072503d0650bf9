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

// Periodic dielectric geometry (period 1 in x), support box and quadrature.

#include <optional>
#include <string>
#include <vector>

namespace siegert {

enum class Shape { Disk, Rect };

struct Inclusion {
  Shape shape = Shape::Disk;
  double cx = 0.5;
  double cz = 0.0;
  double radius = 0.0;  // disk
  double width = 0.0;   // rectangle, along x
  double height = 0.0;  // rectangle, along z
  double eps = 1.0;

  bool contains(double x, double z) const;  // no periodic images
  double zmin() const;
  double zmax() const;
  double area() const;
};

enum class Coupling { None, DoubleArray };

// Either a single inclusion list (coupling None), or two arrays placed at
// z = +h (upper, eps_1) and z = -h (lower, eps_2) for h in the open interval
// (h_min, h_max).
struct StructureSpec {
  Coupling coupling = Coupling::None;
  std::vector<Inclusion> inclusions;
  std::vector<Inclusion> upper;
  std::vector<Inclusion> lower;
  double h_min = 0.0;
  double h_max = 0.0;

  bool empty() const;
  bool in_range(double h) const;
  // Inclusions positioned for coupling value h (h ignored for None).
  std::vector<Inclusion> placed(double h) const;
};

// Throws InvalidArgument describing the first violated invariant.
void validate(const StructureSpec& s);

double eval_epsilon(const StructureSpec& s, double h, double x, double z);

struct SupportBox {
  double z_lo = 0.0;
  double z_hi = 0.0;
  bool degenerate = false;
};

// z-extent of the structure over the whole coupling range, padded by 5% of
// its height on each side.
SupportBox support_box(const StructureSpec& s);

struct QuadNode {
  double x;
  double z;
  double w;         // area weight
  double contrast;  // eps of the owning inclusion minus 1
  int group;        // index into QuadratureDomain::parts
};

struct QuadratureDomain {
  SupportBox box;
  std::vector<Inclusion> parts;  // placed inclusions, one per group
  std::vector<QuadNode> nodes;
  int order = 0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

// Disks: Gauss-Legendre in rho^2 (order points) times the periodic trapezoid
// rule in angle (2*order points, mirror symmetric). Rectangles: order x order
// tensor Gauss-Legendre. Overlapping inclusions keep separate node sets; their
// contrasts add.
QuadratureDomain build_quadrature(const StructureSpec& s, double h, int order);

// int_part ln|r - r'| dA' in closed form.
double log_potential(const Inclusion& part, double x, double z);

}  // namespace siegert
