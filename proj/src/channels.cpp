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

#include "siegert/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "siegert/error.hpp"

namespace siegert {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CutPoint: return "CutPoint";
    case ErrorCode::BranchPoint: return "BranchPoint";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SlowConvergence: return "SlowConvergence";
    case ErrorCode::TailDivergence: return "TailDivergence";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::NoneInDisk: return "NoneInDisk";
    case ErrorCode::MultipleInDisk: return "MultipleInDisk";
    case ErrorCode::ContourHitsEigenvalue: return "ContourHitsEigenvalue";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CutCollision: return "CutCollision";
    case ErrorCode::NotNearBic: return "NotNearBic";
    case ErrorCode::PoorFit: return "PoorFit";
    case ErrorCode::BranchLost: return "BranchLost";
    case ErrorCode::LeftCutPlane: return "LeftCutPlane";
    case ErrorCode::NoMinimum: return "NoMinimum";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NegativeRealPart: return "NegativeRealPart";
    case ErrorCode::QuadratureBudget: return "QuadratureBudget";
    case ErrorCode::PoleNotEnclosed: return "PoleNotEnclosed";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

cplx branch_sqrt(cplx w) {
  if (w == cplx(0.0, 0.0)) return 0.0;
  if (w.real() == 0.0 && w.imag() < 0.0)
    throw Error(ErrorCode::CutPoint, "branch_sqrt: argument on the negative imaginary axis");
  // std::arg is in (-pi, pi]; shift the third quadrant into (pi, 3pi/2).
  double arg = std::arg(w);
  if (arg < -kPi / 2) arg += kTwoPi;
  return std::polar(std::sqrt(std::abs(w)), 0.5 * arg);
}

std::vector<Threshold> diffraction_thresholds(double kx, int max_order) {
  if (max_order < 0) throw Error(ErrorCode::InvalidArgument, "diffraction_thresholds: M < 0");
  std::vector<Threshold> out;
  out.reserve(2 * max_order + 1);
  for (int m = -max_order; m <= max_order; ++m) {
    const double km = bloch_wavenumber(kx, m);
    out.push_back({m, km * km});
  }
  return out;
}

double reduced_kx(double kx) {
  double r = std::remainder(kx, kTwoPi);  // in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

int ThresholdLadder::interval_of(double kappa) const {
  for (std::size_t l = 0; l < intervals.size(); ++l) {
    const auto& iv = intervals[l];
    if (kappa > iv.lo && kappa < iv.hi) return static_cast<int>(l);
  }
  return -1;
}

ThresholdLadder threshold_ladder(double kx, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "threshold_ladder: count < 1");
  ThresholdLadder ladder;
  ladder.kx = kx;
  const double a = std::abs(reduced_kx(kx));
  // kappa*_0, kappa*_-1, kappa*_1, kappa*_-2, kappa*_2, ...
  ladder.thresholds.push_back({0, a * a});
  for (int m = 1; static_cast<int>(ladder.thresholds.size()) < count; ++m) {
    const double lo = kTwoPi * m - a;
    ladder.thresholds.push_back({-m, lo * lo});
    if (static_cast<int>(ladder.thresholds.size()) >= count) break;
    const double hi = kTwoPi * m + a;
    ladder.thresholds.push_back({m, hi * hi});
  }
  ladder.intervals.push_back({-std::numeric_limits<double>::infinity(), ladder.thresholds[0].value});
  for (std::size_t i = 1; i < ladder.thresholds.size(); ++i)
    ladder.intervals.push_back({ladder.thresholds[i - 1].value, ladder.thresholds[i].value});
  return ladder;
}

ChannelSets classify_channels(const SpectralPoint& p, int max_order) {
  ChannelSets sets;
  for (const auto& t : diffraction_thresholds(p.kx, max_order)) {
    if (p.kappa.real() >= t.value)
      sets.open.push_back(t.m);
    else
      sets.closed.push_back(t.m);
  }
  return sets;
}

bool in_cut_plane(const SpectralPoint& p, int max_order, double margin) {
  if (p.kappa.imag() > 0.0) return true;
  for (const auto& t : diffraction_thresholds(p.kx, max_order)) {
    if (std::abs(p.kappa.real() - t.value) <= margin) return false;
  }
  return true;
}

int default_truncation(const SpectralPoint& p, double min_distance, int cap) {
  const double d = std::max(min_distance, 1e-6);
  const double need = 35.0 / d;
  // Im sqrt(kappa - kx_m^2) ~ |kx_m| for large |m|; choose M with
  // (2 pi M - |kx| - |kappa|^(1/2)) >= need.
  const double base = std::abs(reduced_kx(p.kx)) + std::sqrt(std::abs(p.kappa));
  const int m = static_cast<int>(std::ceil((need + base) / kTwoPi)) + 1;
  return std::min(std::max(m, 2), cap);
}

void require_off_threshold(const SpectralPoint& p, int max_order, double tol) {
  for (const auto& t : diffraction_thresholds(p.kx, max_order)) {
    if (std::abs(p.kappa - cplx(t.value, 0.0)) <= tol * std::max(1.0, t.value))
      throw Error(ErrorCode::BranchPoint,
                  "kappa coincides with diffraction threshold m=" + std::to_string(t.m));
  }
}

}  // namespace siegert
