#include "alab/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "alab/error.hpp"
#include "alab/line_modes.hpp"
#include "alab/signal_io.hpp"

namespace alab {

namespace {

SpaceNorm space_norm(NormKind k) {
  switch (k) {
    case NormKind::L2: return SpaceNorm::L2;
    case NormKind::H1: return SpaceNorm::H1;
    case NormKind::EnergyE: return SpaceNorm::Energy;
    case NormKind::L2Line: return SpaceNorm::L2Line;
  }
  return SpaceNorm::L2;
}

bool is_line(const TrajectoryCloud& c) { return c.basis.kind == BasisKind::TruncatedLineGrid; }

std::size_t tail_dimension(const TrajectoryCloud& c) {
  return is_line(c) ? LineModes(c.basis).mode_count() : c.basis.modeCount;
}

// Per-mode energies, index i holding mode i + 1.
std::vector<std::vector<double>> mode_energies(const TrajectoryCloud& c) {
  std::vector<std::vector<double>> out(c.size());
  if (is_line(c)) {
    const LineModes modes(c.basis);
    std::vector<double> coeffs(modes.mode_count());
    for (std::size_t s = 0; s < c.size(); ++s) {
      modes.analyze(c.snapshots[s], coeffs);
      out[s].resize(coeffs.size());
      for (std::size_t k = 0; k < coeffs.size(); ++k) out[s][k] = modes.mode_norm_sq() * coeffs[k] * coeffs[k];
    }
    return out;
  }
  const auto w = norm_weights(c.basis, space_norm(c.normKind));
  const std::size_t M = c.basis.modeCount;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const auto& z = c.snapshots[s];
    out[s].assign(M, 0.0);
    for (std::size_t b = 0; b < c.basis.components; ++b) {
      for (std::size_t i = 0; i < M; ++i) out[s][i] += w[b * M + i] * z[b * M + i] * z[b * M + i];
    }
  }
  return out;
}

bool plateaus(const std::vector<double>& v, double tol, double floor) {
  if (v.size() < 3) return false;
  const auto first = v.end() - 3;
  const double hi = *std::max_element(first, v.end());
  const double lo = *std::min_element(first, v.end());
  return lo > floor && hi - lo <= tol * hi;
}

double norm_of(const std::vector<double>& w, std::span<const double> a) {
  return std::sqrt(std::max(0.0, weighted_inner(w, a, a)));
}

}  // namespace

std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::L2: return "L2";
    case NormKind::H1: return "H1";
    case NormKind::EnergyE: return "EnergyE";
    case NormKind::L2Line: return "L2Line";
  }
  return "";
}

std::string_view to_string(CompactnessVerdict v) {
  switch (v) {
    case CompactnessVerdict::CompactConsistent: return "CompactConsistent";
    case CompactnessVerdict::NonCompactWitness: return "NonCompactWitness";
    case CompactnessVerdict::Inconclusive: return "Inconclusive";
  }
  return "";
}

void TrajectoryCloud::validate() const {
  basis.validate();
  if (snapshots.empty()) fail(ErrorCode::InvalidParameter, "cloud needs at least one snapshot");
  if (times.size() != snapshots.size()) fail(ErrorCode::InvalidParameter, "one time per snapshot");
  for (const auto& s : snapshots) {
    if (s.size() != basis.width()) fail(ErrorCode::InvalidParameter, "snapshot dimension does not match the basis");
    for (double x : s) {
      if (!std::isfinite(x)) fail(ErrorCode::InvalidSignal, "non-finite snapshot entry");
    }
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) fail(ErrorCode::InvalidParameter, "snapshot times must ascend");
  }
  if ((normKind == NormKind::L2Line) != (basis.kind == BasisKind::TruncatedLineGrid)) {
    fail(ErrorCode::InvalidParameter, "L2Line goes with line grids and only with them");
  }
  if (normKind == NormKind::EnergyE && basis.components != 2) {
    fail(ErrorCode::InvalidParameter, "EnergyE needs position and velocity blocks");
  }
}

TrajectoryCloud TrajectoryCloud::from_signal(const SpectralSignal& traj, NormKind kind, std::size_t stride,
                                             std::size_t first) {
  if (stride == 0) fail(ErrorCode::InvalidParameter, "stride must be positive");
  TrajectoryCloud c;
  c.basis = traj.basis();
  c.normKind = kind;
  for (std::size_t k = first; k < traj.count(); k += stride) {
    auto s = traj.sample(k);
    c.snapshots.emplace_back(s.begin(), s.end());
    c.times.push_back(traj.time(k));
  }
  c.validate();
  return c;
}

double cloud_norm(const TrajectoryCloud& cloud, std::size_t i) {
  const auto w = norm_weights(cloud.basis, space_norm(cloud.normKind));
  return norm_of(w, cloud.snapshots.at(i));
}

double cloud_distance(const TrajectoryCloud& cloud, std::size_t i, std::size_t j) {
  const auto w = norm_weights(cloud.basis, space_norm(cloud.normKind));
  const auto& a = cloud.snapshots.at(i);
  const auto& b = cloud.snapshots.at(j);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

ModulusCurve tail_modulus(const TrajectoryCloud& cloud, const std::vector<std::size_t>& Ms) {
  cloud.validate();
  const std::size_t dim = tail_dimension(cloud);
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    if (Ms[i] > dim) fail(ErrorCode::InvalidParameter, "tail index beyond the basis dimension");
    if (i > 0 && Ms[i] <= Ms[i - 1]) fail(ErrorCode::InvalidParameter, "tail indices must ascend");
  }
  ModulusCurve curve;
  curve.kind = CurveKind::Tail;
  curve.values.assign(Ms.size(), 0.0);
  for (std::size_t M : Ms) curve.taus.push_back(static_cast<double>(M));
  const auto energies = mode_energies(cloud);
  std::vector<double> suffix(dim + 1);
  for (const auto& e : energies) {
    suffix[dim] = 0.0;
    for (std::size_t i = dim; i-- > 0;) suffix[i] = suffix[i + 1] + e[i];
    for (std::size_t q = 0; q < Ms.size(); ++q) curve.values[q] = std::max(curve.values[q], suffix[Ms[q]]);
  }
  return curve;
}

std::size_t epsilon_entropy(const TrajectoryCloud& cloud, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidParameter, "eps must be positive");
  cloud.validate();
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool covered = false;
    for (std::size_t c : centers) {
      if (cloud_distance(cloud, i, c) <= eps) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(i);
  }
  return centers.size();
}

NormGap norm_gap_detail(const TrajectoryCloud& cloud) {
  cloud.validate();
  const std::size_t n = cloud.size();
  if (n < 4) fail(ErrorCode::InvalidParameter, "norm gap needs at least four snapshots");
  const std::size_t q = n / 4;
  const auto w = norm_weights(cloud.basis, space_norm(cloud.normKind));
  const std::size_t d = cloud.basis.width();
  auto average = [&](std::size_t from, std::size_t to) {
    std::vector<double> a(d, 0.0);
    for (std::size_t s = from; s < to; ++s) {
      for (std::size_t k = 0; k < d; ++k) a[k] += cloud.snapshots[s][k];
    }
    for (double& x : a) x /= static_cast<double>(to - from);
    return a;
  };
  NormGap g;
  g.candidate = average(n - q, n);
  const auto third = average(n - 2 * q, n - q);
  for (std::size_t s = n - q; s < n; ++s) g.limsupNorm = std::max(g.limsupNorm, norm_of(w, cloud.snapshots[s]));
  g.candidateNorm = norm_of(w, g.candidate);
  std::vector<double> diff(d);
  for (std::size_t k = 0; k < d; ++k) diff[k] = g.candidate[k] - third[k];
  g.stability = norm_of(w, diff);
  g.gap = g.limsupNorm - g.candidateNorm;
  return g;
}

double norm_gap(const TrajectoryCloud& cloud) { return norm_gap_detail(cloud).gap; }

ModulusCurve spatial_tail(const TrajectoryCloud& cloud, const std::vector<double>& Rs) {
  cloud.validate();
  if (!is_line(cloud)) fail(ErrorCode::InvalidParameter, "spatial tails need a line grid");
  const double L = cloud.basis.halfLength;
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    if (!(Rs[i] >= 0.0) || Rs[i] >= L) fail(ErrorCode::InvalidParameter, "radius must lie in [0, L)");
    if (i > 0 && Rs[i] <= Rs[i - 1]) fail(ErrorCode::InvalidParameter, "radii must ascend");
  }
  const auto w = norm_weights(cloud.basis, SpaceNorm::L2Line);
  ModulusCurve curve;
  curve.kind = CurveKind::SpatialTail;
  curve.taus = Rs;
  curve.values.assign(Rs.size(), 0.0);
  for (const auto& u : cloud.snapshots) {
    for (std::size_t q = 0; q < Rs.size(); ++q) {
      double s = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (std::abs(cloud.basis.node(j)) > Rs[q]) s += w[j] * u[j] * u[j];
      }
      curve.values[q] = std::max(curve.values[q], std::sqrt(s));
    }
  }
  return curve;
}

CompactnessReport verdict(const TrajectoryCloud& cloud, const CompactnessThresholds& th) {
  cloud.validate();
  CompactnessReport r;
  const std::size_t dim = tail_dimension(cloud);
  std::vector<std::size_t> Ms;
  if (th.Ms) {
    Ms = *th.Ms;
  } else {
    for (std::size_t M = 0; M < dim; ++M) Ms.push_back(M);
  }
  r.tailCurve = tail_modulus(cloud, Ms);

  double maxNorm = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) maxNorm = std::max(maxNorm, cloud_norm(cloud, i));
  r.decay = th.decayFactor * maxNorm * maxNorm;
  r.gapThreshold = th.gapFactor * maxNorm;

  std::vector<double> eps;
  if (th.epsilons) {
    eps = *th.epsilons;
  } else {
    const double base = maxNorm > 0.0 ? maxNorm : 1.0;
    for (int k = 0; k <= 6; ++k) eps.push_back(std::ldexp(base, -k));
  }
  for (double e : eps) r.entropyCounts.emplace_back(e, epsilon_entropy(cloud, e));

  if (cloud.size() >= 4) {
    r.normGap = norm_gap_detail(cloud);
    r.stable = r.normGap.stability <= r.gapThreshold;
  } else {
    r.stable = false;
    r.note = "fewer than four snapshots; no limit candidate. ";
  }

  if (is_line(cloud)) {
    std::vector<double> Rs;
    if (th.Rs) {
      Rs = *th.Rs;
    } else {
      const double L = cloud.basis.halfLength;
      for (int k = 0; k < 8; ++k) Rs.push_back(L * k / 8.0);
    }
    r.spatialCurve = spatial_tail(cloud, Rs);
  }

  const double floor = th.floorFactor * r.decay;
  const bool tailPlateau = plateaus(r.tailCurve.values, th.plateauTolerance, floor);
  const bool spatialPlateau =
      r.spatialCurve && plateaus(r.spatialCurve->values, th.plateauTolerance, std::sqrt(floor));

  if (tailPlateau || spatialPlateau) {
    // Anchor at the snapshot carrying the largest tail, pair it with the farthest snapshot.
    double plateau = 0.0;
    double need = 0.0;
    std::size_t anchor = 0;
    if (tailPlateau) {
      plateau = r.tailCurve.values.back();
      need = 0.5 * std::max(plateau, std::sqrt(plateau));
      const auto energies = mode_energies(cloud);
      const std::size_t M = Ms.back();
      double best = -1.0;
      for (std::size_t s = 0; s < cloud.size(); ++s) {
        double t = 0.0;
        for (std::size_t i = M; i < dim; ++i) t += energies[s][i];
        if (t > best) {
          best = t;
          anchor = s;
        }
      }
      r.note += "plateau of the mode tail (energy units). ";
    } else {
      plateau = r.spatialCurve->values.back();
      need = 0.5 * plateau;
      const auto w = norm_weights(cloud.basis, SpaceNorm::L2Line);
      const double R = r.spatialCurve->taus.back();
      double best = -1.0;
      for (std::size_t s = 0; s < cloud.size(); ++s) {
        double t = 0.0;
        for (std::size_t j = 0; j < cloud.basis.modeCount; ++j) {
          if (std::abs(cloud.basis.node(j)) > R) t += w[j] * cloud.snapshots[s][j] * cloud.snapshots[s][j];
        }
        if (t > best) {
          best = t;
          anchor = s;
        }
      }
      r.note += "plateau of the spatial tail (norm units). ";
    }
    r.plateau = plateau;
    std::size_t partner = anchor;
    double far = 0.0;
    for (std::size_t s = 0; s < cloud.size(); ++s) {
      const double d = cloud_distance(cloud, anchor, s);
      if (d > far) {
        far = d;
        partner = s;
      }
    }
    if (far >= need && partner != anchor) {
      r.witness = std::make_pair(std::min(anchor, partner), std::max(anchor, partner));
      r.witnessDistance = far;
      r.verdict = CompactnessVerdict::NonCompactWitness;
    } else {
      r.note += "plateau found but no snapshot pair is far enough apart. ";
      r.verdict = CompactnessVerdict::Inconclusive;
    }
    return r;
  }

  const bool tailSmall = r.tailCurve.values.empty() || r.tailCurve.values.back() <= r.decay;
  const bool spatialSmall = !r.spatialCurve || r.spatialCurve->values.back() <= std::sqrt(r.decay);
  const bool gapSmall = cloud.size() >= 4 && r.normGap.gap <= r.gapThreshold;
  if (tailSmall && spatialSmall && gapSmall && r.stable) {
    r.verdict = CompactnessVerdict::CompactConsistent;
  } else {
    if (cloud.size() >= 4 && !r.stable) r.note += "componentwise averages did not stabilize. ";
    r.verdict = CompactnessVerdict::Inconclusive;
  }
  return r;
}

void write_report(std::ostream& out, const CompactnessReport& r) {
  out << "verdict: " << to_string(r.verdict) << '\n';
  out << "decay_threshold: " << format_real(r.decay) << '\n';
  out << "gap_threshold: " << format_real(r.gapThreshold) << '\n';
  out << "norm_gap: " << format_real(r.normGap.gap) << '\n';
  out << "limsup_norm: " << format_real(r.normGap.limsupNorm) << '\n';
  out << "candidate_norm: " << format_real(r.normGap.candidateNorm) << '\n';
  out << "averages_stable: " << (r.stable ? "yes" : "no") << '\n';
  if (r.plateau) out << "plateau: " << format_real(*r.plateau) << '\n';
  if (r.witness) {
    out << "witness: " << r.witness->first << ' ' << r.witness->second << '\n';
    out << "witness_distance: " << format_real(r.witnessDistance) << '\n';
  }
  if (!r.tailCurve.values.empty()) out << "tail_last: " << format_real(r.tailCurve.values.back()) << '\n';
  if (r.spatialCurve) out << "spatial_tail_last: " << format_real(r.spatialCurve->values.back()) << '\n';
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  out << "limitation: " << r.limitation << '\n';
}

void write_tail_csv(std::ostream& out, const CompactnessReport& r) {
  out << "M,tail\n";
  for (std::size_t i = 0; i < r.tailCurve.size(); ++i) {
    out << format_real(r.tailCurve.taus[i]) << ',' << format_real(r.tailCurve.values[i]) << '\n';
  }
}

void write_entropy_csv(std::ostream& out, const CompactnessReport& r) {
  out << "eps,count\n";
  for (const auto& [e, c] : r.entropyCounts) out << format_real(e) << ',' << c << '\n';
}

}  // namespace alab
