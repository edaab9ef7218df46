#include "alab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "alab/error.hpp"

namespace alab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_sine(const BasisDescriptor& b, std::size_t modes, const char* what) {
  if (b.kind != BasisKind::DirichletSine || b.components != 1) {
    fail(ErrorCode::InvalidParameter, std::string(what) + " needs a scalar DirichletSine basis");
  }
  if (b.modeCount < modes) fail(ErrorCode::InvalidParameter, std::string(what) + " needs more modes");
}

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

double pow2_at_most(double x) { return std::exp2(std::floor(std::log2(x))); }

}  // namespace

std::string_view to_string(ForceName n) {
  switch (n) {
    case ForceName::HeatPulse: return "HeatPulse";
    case ForceName::WaveResonant: return "WaveResonant";
    case ForceName::TravellingBump: return "TravellingBump";
    case ForceName::RapidOscillation: return "RapidOscillation";
    case ForceName::SmoothReference: return "SmoothReference";
  }
  return "";
}

ForceName parse_force_name(std::string_view s) {
  for (ForceName n : kAllForces) {
    if (to_string(n) == s) return n;
  }
  fail(ErrorCode::InvalidParameter, "unknown force '" + std::string(s) + "'");
}

Reconstruction default_reconstruction(ForceName n) {
  return n == ForceName::HeatPulse ? Reconstruction::PiecewiseConstant : Reconstruction::PiecewiseLinear;
}

std::string ForceSpec::description() const {
  std::ostringstream os;
  os << to_string(name);
  switch (name) {
    case ForceName::HeatPulse:
    case ForceName::WaveResonant: os << " nmax=" << nmax; break;
    case ForceName::TravellingBump: os << " alpha=" << alpha << " width=" << width; break;
    default: break;
  }
  return os.str();
}

double bump(double x, double w) {
  const double y = x / w;
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_d1(double x, double w) {
  const double y = x / w;
  const double q = 1.0 - y * y;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-2.0 * y / (q * q)) / w;
}

double bump_d2(double x, double w) {
  const double y = x / w;
  const double q = 1.0 - y * y;
  if (q <= 0.0) return 0.0;
  const double q2 = q * q;
  const double v = std::exp(-1.0 / q);
  return v * (4.0 * y * y / (q2 * q2) - 2.0 / q2 - 8.0 * y * y / (q2 * q)) / (w * w);
}

SpectralSignal generate(const ForceSpec& spec, const TimeGrid& grid, const BasisDescriptor& basis) {
  grid.validate();
  basis.validate();
  const Reconstruction rec = spec.reconstruction ? *spec.reconstruction : default_reconstruction(spec.name);
  SpectralSignal g(grid, basis, rec);
  const double dt = grid.dt;

  switch (spec.name) {
    case ForceName::HeatPulse: {
      if (spec.nmax < 1 || spec.nmax > 64) fail(ErrorCode::InvalidParameter, "nmax must be in 1..64");
      require_sine(basis, spec.nmax, "HeatPulse");
      const double nm = static_cast<double>(spec.nmax);
      if (dt > 1.0 / (2.0 * nm * nm) * (1.0 + 1e-12)) {
        fail(ErrorCode::ResolutionTooCoarse, "HeatPulse needs dt <= 1/(2 nmax^2)");
      }
      for (std::size_t k = 0; k < grid.count; ++k) {
        const double t = grid.time(k);
        auto s = g.sample(k);
        for (std::size_t n = 1; n <= spec.nmax; ++n) {
          const double a = static_cast<double>(n);
          const double b = a + 1.0 / (a * a);
          if (rec == Reconstruction::PiecewiseConstant) {
            const double len = overlap(t, t + dt, a, b);
            if (len > 0.0) s[n - 1] = len >= dt ? a : a * (len / dt);
          } else if (t >= a && t < b) {
            s[n - 1] = a;
          }
        }
      }
      break;
    }
    case ForceName::WaveResonant: {
      if (spec.nmax < 1 || spec.nmax > 64) fail(ErrorCode::InvalidParameter, "nmax must be in 1..64");
      require_sine(basis, spec.nmax, "WaveResonant");
      if (dt > kPi / (8.0 * static_cast<double>(spec.nmax)) * (1.0 + 1e-12)) {
        fail(ErrorCode::ResolutionTooCoarse, "WaveResonant needs dt <= pi/(8 nmax)");
      }
      for (std::size_t k = 0; k < grid.count; ++k) {
        const double t = grid.time(k);
        const double block = std::floor((t + 1e-9 * dt) / (3.0 * kPi));
        if (block < 1.0 || block > static_cast<double>(spec.nmax)) continue;
        const auto n = static_cast<std::size_t>(block);
        const double phase = std::max(0.0, t - 3.0 * block * kPi);
        g.sample(k)[n - 1] = std::cos(block * phase);
      }
      break;
    }
    case ForceName::TravellingBump: {
      if (basis.kind != BasisKind::TruncatedLineGrid) fail(ErrorCode::InvalidParameter, "TravellingBump needs a line grid");
      if (basis.halfLength < 8.0) fail(ErrorCode::InvalidParameter, "TravellingBump needs L >= 8");
      if (!(spec.width > 0.0)) fail(ErrorCode::InvalidParameter, "bump width must be positive");
      if (basis.dx() > spec.width / 8.0) fail(ErrorCode::ResolutionTooCoarse, "bump needs dx <= width/8");
      const double w = spec.width;
      for (std::size_t k = 0; k < grid.count; ++k) {
        const double t = grid.time(k);
        auto s = g.sample(k);
        for (std::size_t j = 1; j + 1 < basis.modeCount; ++j) {
          const double z = basis.node(j) - t;
          s[j] = -bump_d1(z, w) + spec.alpha * bump(z, w) - bump_d2(z, w);
        }
      }
      break;
    }
    case ForceName::RapidOscillation: {
      require_sine(basis, 1, "RapidOscillation");
      const double tEnd = grid.end();
      if (tEnd > 0.0 && dt > 2.0 * kPi * std::exp(-tEnd) / 16.0) {
        fail(ErrorCode::ResolutionTooCoarse, "RapidOscillation needs 16 samples per period at the end of the span");
      }
      for (std::size_t k = 0; k < grid.count; ++k) {
        const double t = grid.time(k);
        g.sample(k)[0] = t > 0.0 ? t * std::sin(std::exp(t)) : 0.0;
      }
      break;
    }
    case ForceName::SmoothReference: {
      require_sine(basis, 1, "SmoothReference");
      for (std::size_t k = 0; k < grid.count; ++k) g.sample(k)[0] = std::sin(grid.time(k));
      break;
    }
  }
  return g;
}

GalleryDefaults gallery_defaults(const ForceSpec& spec) {
  switch (spec.name) {
    case ForceName::HeatPulse: {
      const double nm = static_cast<double>(spec.nmax);
      const double dt = pow2_at_most(1.0 / (2.0 * nm * nm));
      return {{0.0, dt, TimeGrid::samples_for(nm + 2.0, dt)}, BasisDescriptor::sine(spec.nmax)};
    }
    case ForceName::WaveResonant: {
      const double dt = kPi / (8.0 * static_cast<double>(spec.nmax));
      const double span = 3.0 * static_cast<double>(spec.nmax + 1) * kPi;
      return {{0.0, dt, TimeGrid::samples_for(span, dt)}, BasisDescriptor::sine(spec.nmax)};
    }
    case ForceName::TravellingBump: {
      const double dt = 1.0 / 2048.0;
      return {{0.0, dt, TimeGrid::samples_for(6.0, dt)}, BasisDescriptor::line(8.0, 257)};
    }
    case ForceName::RapidOscillation: {
      const double dt = 1.0 / 4096.0;
      return {{0.0, dt, TimeGrid::samples_for(7.0, dt)}, BasisDescriptor::sine(1)};
    }
    case ForceName::SmoothReference: {
      const double dt = 1.0 / 128.0;
      return {{0.0, dt, TimeGrid::samples_for(16.0, dt)}, BasisDescriptor::sine(8)};
    }
  }
  fail(ErrorCode::InvalidParameter, "unknown force");
}

double heat_mode_oracle(int n, double t) {
  if (n < 1 || t < 0.0) fail(ErrorCode::InvalidParameter, "heat oracle needs n >= 1 and t >= 0");
  const double a = static_cast<double>(n);
  const double lam = a * a;
  const double end = a + 1.0 / lam;
  if (t <= a) return 0.0;
  if (t <= end) return -std::expm1(-lam * (t - a)) / a;
  return -std::expm1(-1.0) / a * std::exp(-lam * (t - end));
}

std::pair<double, double> wave_mode_oracle(int n, double t) {
  if (n < 1) fail(ErrorCode::InvalidParameter, "wave oracle needs n >= 1");
  const double a = static_cast<double>(n);
  const double start = 3.0 * a * kPi;
  if (t < start || t >= 3.0 * (a + 1.0) * kPi) fail(ErrorCode::OutOfWindow, "time outside the forcing window of mode n");
  const double s = t - start;
  const double r = std::sqrt(4.0 * a * a - 1.0);
  const double e = std::exp(-0.5 * s);
  const double sn = std::sin(0.5 * r * s);
  const double cs = std::cos(0.5 * r * s);
  const double u = -2.0 * e * sn / r + std::sin(a * s) / a;
  const double v = e * sn / r - e * cs + std::cos(a * s);
  return {u, v};
}

double wave_probe_time(int n) { return kPi * (3.0 * n + 2.0 + 1.0 / (2.0 * n)); }

double wave_lower_bound(int n) {
  const double a = static_cast<double>(n);
  return 1.0 / a - 2.0 * std::exp(-kPi) / std::sqrt(4.0 * a * a - 1.0);
}

}  // namespace alab
