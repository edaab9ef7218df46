#include "alab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "alab/error.hpp"
#include "alab/exact_sum.hpp"
#include "window.hpp"

namespace alab {

namespace {

constexpr double kAlignTol = 1e-9;

SpaceNorm resolve(const SpectralSignal& g, std::optional<SpaceNorm> norm) {
  return norm ? *norm : default_norm(g.basis());
}

void require_span(const SpectralSignal& g, double length, const char* what) {
  if (g.grid().span() < length * (1.0 - 1e-12)) {
    fail(ErrorCode::SpanTooShort, std::string(what) + ": span " + std::to_string(g.grid().span()) +
                                      " shorter than " + std::to_string(length));
  }
}

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorCode::InvalidParameter, "p must be finite and > 1");
}

}  // namespace

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidParameter, "dt must be positive");
  if (!std::isfinite(t0)) fail(ErrorCode::InvalidParameter, "t0 must be finite");
  if (count < 2) fail(ErrorCode::InvalidParameter, "grid needs at least 2 samples");
}

std::size_t TimeGrid::samples_for(double length, double dt) {
  const double steps = length / dt;
  const double r = std::round(steps);
  const auto n = std::abs(steps - r) <= kAlignTol * std::max(1.0, r) ? r : std::ceil(steps);
  return static_cast<std::size_t>(n) + 1;
}

BasisDescriptor BasisDescriptor::sine(std::size_t modes, std::size_t components) {
  BasisDescriptor b;
  b.kind = BasisKind::DirichletSine;
  b.modeCount = modes;
  b.components = components;
  b.validate();
  return b;
}

BasisDescriptor BasisDescriptor::line(double L, std::size_t nodes) {
  BasisDescriptor b;
  b.kind = BasisKind::TruncatedLineGrid;
  b.modeCount = nodes;
  b.halfLength = L;
  b.validate();
  return b;
}

double BasisDescriptor::dx() const {
  return kind == BasisKind::TruncatedLineGrid ? 2.0 * halfLength / static_cast<double>(modeCount - 1) : 0.0;
}

double BasisDescriptor::node(std::size_t j) const { return -halfLength + static_cast<double>(j) * dx(); }

void BasisDescriptor::validate() const {
  if (modeCount < 1) fail(ErrorCode::InvalidParameter, "modeCount must be >= 1");
  if (components != 1 && components != 2) fail(ErrorCode::InvalidParameter, "components must be 1 or 2");
  if (kind == BasisKind::TruncatedLineGrid) {
    if (modeCount < 3) fail(ErrorCode::InvalidParameter, "line grid needs at least 3 nodes");
    if (!(halfLength > 0.0)) fail(ErrorCode::InvalidParameter, "line grid half-length must be positive");
    if (components != 1) fail(ErrorCode::InvalidParameter, "line grid stores one component");
  }
}

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::DirichletSine ? "DirichletSine" : "TruncatedLineGrid";
}

std::string_view to_string(Reconstruction r) {
  return r == Reconstruction::PiecewiseConstant ? "PiecewiseConstant" : "PiecewiseLinear";
}

std::string_view to_string(SpaceNorm n) {
  switch (n) {
    case SpaceNorm::L2: return "L2";
    case SpaceNorm::H1: return "H1";
    case SpaceNorm::Hminus1: return "Hminus1";
    case SpaceNorm::Energy: return "EnergyE";
    case SpaceNorm::L2Line: return "L2Line";
  }
  return "L2";
}

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Continuity: return "Continuity";
    case CurveKind::Normality: return "Normality";
    case CurveKind::ExpKernel: return "ExpKernel";
    case CurveKind::Tail: return "Tail";
    case CurveKind::SpatialTail: return "SpatialTail";
    case CurveKind::Residual: return "Residual";
    case CurveKind::Entropy: return "Entropy";
  }
  return "Continuity";
}

SpaceNorm default_norm(const BasisDescriptor& basis) {
  if (basis.kind == BasisKind::TruncatedLineGrid) return SpaceNorm::L2Line;
  return basis.components == 2 ? SpaceNorm::Energy : SpaceNorm::L2;
}

std::vector<double> norm_weights(const BasisDescriptor& basis, SpaceNorm norm) {
  const std::size_t M = basis.modeCount;
  std::vector<double> w(basis.width(), 0.0);
  if (basis.kind == BasisKind::TruncatedLineGrid) {
    if (norm != SpaceNorm::L2Line) fail(ErrorCode::InvalidParameter, "line grid supports only the L2Line norm");
    const double dx = basis.dx();
    std::fill(w.begin(), w.end(), dx);
    w.front() = 0.5 * dx;
    w.back() = 0.5 * dx;
    return w;
  }
  if (norm == SpaceNorm::L2Line) fail(ErrorCode::InvalidParameter, "L2Line norm needs a line grid");
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < M; ++i) {
    const double n = static_cast<double>(i + 1);
    switch (norm) {
      case SpaceNorm::L2: w[i] = pi; break;
      case SpaceNorm::H1: w[i] = pi * n * n; break;
      case SpaceNorm::Hminus1: w[i] = pi / (n * n); break;
      case SpaceNorm::Energy: w[i] = pi * n * n; break;
      case SpaceNorm::L2Line: break;
    }
    if (basis.components == 2) w[M + i] = norm == SpaceNorm::Energy ? pi : 0.0;
  }
  return w;
}

double weighted_inner(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

SpectralSignal::SpectralSignal(TimeGrid grid, BasisDescriptor basis, Reconstruction reconstruction)
    : grid_(grid), basis_(basis), reconstruction_(reconstruction), coeffs_(grid.count * basis.width(), 0.0) {
  grid_.validate();
  basis_.validate();
}

SpectralSignal::SpectralSignal(TimeGrid grid, BasisDescriptor basis, Reconstruction reconstruction,
                               std::vector<double> coeffs)
    : grid_(grid), basis_(basis), reconstruction_(reconstruction), coeffs_(std::move(coeffs)) {
  grid_.validate();
  basis_.validate();
  if (coeffs_.size() != grid_.count * basis_.width()) {
    fail(ErrorCode::InvalidSignal, "coefficient storage does not match grid and basis");
  }
}

std::span<const double> SpectralSignal::sample(std::size_t k) const {
  return {coeffs_.data() + k * width(), width()};
}

std::span<double> SpectralSignal::sample(std::size_t k) { return {coeffs_.data() + k * width(), width()}; }

void SpectralSignal::validate() const {
  for (double v : coeffs_) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidSignal, "non-finite coefficient");
  }
}

std::vector<double> SpectralSignal::value_at(double t) const {
  const double pos = (t - grid_.t0) / grid_.dt;
  const double last = static_cast<double>(count() - 1);
  if (pos < -kAlignTol || pos > last + kAlignTol) fail(ErrorCode::OutOfWindow, "time outside signal span");
  const double clamped = std::clamp(pos, 0.0, last);
  auto k = static_cast<std::size_t>(std::floor(clamped));
  double theta = clamped - static_cast<double>(k);
  if (std::abs(theta - 1.0) <= kAlignTol) {
    ++k;
    theta = 0.0;
  }
  if (k >= count() - 1) {
    auto s = sample(count() - 1);
    return {s.begin(), s.end()};
  }
  auto a = sample(k);
  if (reconstruction_ == Reconstruction::PiecewiseConstant || theta <= kAlignTol) return {a.begin(), a.end()};
  auto b = sample(k + 1);
  std::vector<double> out(width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - theta) * a[i] + theta * b[i];
  return out;
}

void ModulusCurve::validate() const {
  if (taus.size() != values.size()) fail(ErrorCode::InvalidParameter, "curve size mismatch");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (i > 0 && !(taus[i] > taus[i - 1])) fail(ErrorCode::InvalidParameter, "curve abscissae not ascending");
    if (!std::isfinite(values[i]) || values[i] < 0.0) fail(ErrorCode::InvalidParameter, "curve value invalid");
  }
}

long long grid_steps(double offset, double dt) {
  const double q = offset / dt;
  const double r = std::round(q);
  if (!std::isfinite(q) || std::abs(q - r) > kAlignTol * std::max(1.0, std::abs(r))) {
    fail(ErrorCode::MisalignedOffset, "offset " + std::to_string(offset) + " is not a multiple of dt");
  }
  return static_cast<long long>(r);
}

namespace detail {

GramSeries gram_series(const SpectralSignal& g, std::span<const double> w) {
  const std::size_t n = g.count();
  GramSeries s;
  s.sq.resize(n);
  s.cross.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) s.sq[k] = weighted_inner(w, g.sample(k), g.sample(k));
  if (g.reconstruction() == Reconstruction::PiecewiseLinear) {
    for (std::size_t k = 0; k + 1 < n; ++k) s.cross[k] = weighted_inner(w, g.sample(k), g.sample(k + 1));
  }
  return s;
}

GramSeries gram_series_diff(const SpectralSignal& g, std::span<const double> w, std::size_t sigma) {
  const std::size_t n = g.count() - sigma;
  const std::size_t width = g.width();
  GramSeries s;
  s.sq.resize(n);
  s.cross.resize(n > 0 ? n - 1 : 0);
  std::vector<double> prev(width), cur(width);
  for (std::size_t k = 0; k < n; ++k) {
    auto a = g.sample(k);
    auto b = g.sample(k + sigma);
    for (std::size_t i = 0; i < width; ++i) cur[i] = b[i] - a[i];
    s.sq[k] = weighted_inner(w, cur, cur);
    if (k > 0 && g.reconstruction() == Reconstruction::PiecewiseLinear) s.cross[k - 1] = weighted_inner(w, prev, cur);
    std::swap(prev, cur);
  }
  return s;
}

double interval_part(double a, double b, double c, double p, Reconstruction r, double f0, double f1) {
  if (r == Reconstruction::PiecewiseConstant) return std::pow(a, 0.5 * p) * (f1 - f0);
  if (p == 2.0) {
    auto Q = [&](double t) {
      const double t2 = t * t;
      const double t3 = t2 * t;
      return a * (t - t2 + t3 / 3.0) + c * (t2 - 2.0 * t3 / 3.0) + b * t3 / 3.0;
    };
    if (f0 == 0.0 && f1 == 1.0) return (a + b + c) / 3.0;
    return Q(f1) - Q(f0);
  }
  double sum = 0.0;
  const double len = f1 - f0;
  for (int i = 0; i < 4; ++i) {
    const double t = f0 + len * kGauss4Nodes[i];
    const double q = (1.0 - t) * (1.0 - t) * a + 2.0 * t * (1.0 - t) * c + t * t * b;
    sum += kGauss4Weights[i] * std::pow(std::max(q, 0.0), 0.5 * p);
  }
  return sum * len;
}

std::vector<double> interval_integrals(const GramSeries& s, double p, Reconstruction r, double dt) {
  const std::size_t n = s.sq.size();
  std::vector<double> out(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out[k] = dt * interval_part(s.sq[k], s.sq[k + 1], r == Reconstruction::PiecewiseLinear ? s.cross[k] : 0.0, p,
                                r, 0.0, 1.0);
  }
  return out;
}

WindowLayout window_layout(double length, double dt) {
  const double q = length / dt;
  double whole = std::floor(q);
  double frac = q - whole;
  if (frac < kAlignTol) frac = 0.0;
  if (frac > 1.0 - kAlignTol) {
    whole += 1.0;
    frac = 0.0;
  }
  return {static_cast<std::size_t>(whole), frac};
}

namespace {

double partial_tail(const GramSeries& s, std::size_t k, const WindowLayout& layout, double p, Reconstruction r,
                    double dt) {
  if (layout.frac == 0.0) return 0.0;
  const double c = r == Reconstruction::PiecewiseLinear ? s.cross[k] : 0.0;
  return dt * interval_part(s.sq[k], s.sq[k + 1], c, p, r, 0.0, layout.frac);
}

std::size_t window_count(const GramSeries& s, const WindowLayout& layout) {
  const std::size_t intervals = s.sq.empty() ? 0 : s.sq.size() - 1;
  const std::size_t need = layout.full + (layout.frac > 0.0 ? 1 : 0);
  return intervals >= need ? intervals - need + 1 : 0;
}

}  // namespace

std::vector<double> sliding_windows(const GramSeries& s, const std::vector<double>& integrals,
                                    const WindowLayout& layout, double p, Reconstruction r, double dt) {
  const std::size_t count = window_count(s, layout);
  std::vector<double> out(count);
  ExactSum acc;
  for (std::size_t k = 0; k < layout.full && count > 0; ++k) acc.add(integrals[k]);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = acc.value() + partial_tail(s, i + layout.full, layout, p, r, dt);
    if (i + 1 < count) {
      acc.add(integrals[i + layout.full]);
      acc.subtract(integrals[i]);
    }
  }
  return out;
}

double window_at(const GramSeries& s, const std::vector<double>& integrals, const WindowLayout& layout,
                 std::size_t start, double p, Reconstruction r, double dt) {
  if (start >= window_count(s, layout)) fail(ErrorCode::OutOfWindow, "window leaves the signal span");
  ExactSum acc;
  for (std::size_t k = start; k < start + layout.full; ++k) acc.add(integrals[k]);
  return acc.value() + partial_tail(s, start + layout.full, layout, p, r, dt);
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace detail

std::vector<double> unit_window_integrals(const SpectralSignal& g, double p, std::optional<SpaceNorm> norm) {
  require_p(p);
  g.validate();
  require_span(g, 1.0, "unit window");
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  const auto s = detail::gram_series(g, w);
  const auto integrals = detail::interval_integrals(s, p, g.reconstruction(), g.grid().dt);
  const auto layout = detail::window_layout(1.0, g.grid().dt);
  return detail::sliding_windows(s, integrals, layout, p, g.reconstruction(), g.grid().dt);
}

double unit_window_integral(const SpectralSignal& g, double p, double t, std::optional<SpaceNorm> norm) {
  require_p(p);
  g.validate();
  const long long start = grid_steps(t - g.grid().t0, g.grid().dt);
  if (start < 0) fail(ErrorCode::OutOfWindow, "window starts before the signal");
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  const auto s = detail::gram_series(g, w);
  const auto integrals = detail::interval_integrals(s, p, g.reconstruction(), g.grid().dt);
  const auto layout = detail::window_layout(1.0, g.grid().dt);
  return detail::window_at(s, integrals, layout, static_cast<std::size_t>(start), p, g.reconstruction(),
                           g.grid().dt);
}

double lpb_norm(const SpectralSignal& g, double p, std::optional<SpaceNorm> norm) {
  const auto windows = unit_window_integrals(g, p, norm);
  return std::pow(detail::max_of(windows), 1.0 / p);
}

ModulusCurve modulus_of_continuity(const SpectralSignal& g, double p, const std::vector<double>& taus,
                                   std::optional<SpaceNorm> norm) {
  require_p(p);
  g.validate();
  require_span(g, 1.0, "modulus of continuity");
  const double dt = g.grid().dt;
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  const auto layout = detail::window_layout(1.0, dt);
  ModulusCurve curve{{}, {}, CurveKind::Continuity};
  for (double tau : taus) {
    const long long sigma = grid_steps(tau, dt);
    if (sigma <= 0) fail(ErrorCode::InvalidParameter, "offsets must be positive");
    if (!(tau < g.grid().span() - 1.0)) fail(ErrorCode::SpanTooShort, "offset too large for the span");
    const auto s = detail::gram_series_diff(g, w, static_cast<std::size_t>(sigma));
    const auto integrals = detail::interval_integrals(s, p, g.reconstruction(), dt);
    const auto windows = detail::sliding_windows(s, integrals, layout, p, g.reconstruction(), dt);
    curve.taus.push_back(tau);
    curve.values.push_back(detail::max_of(windows));
  }
  curve.validate();
  return curve;
}

ModulusCurve normality_modulus(const SpectralSignal& g, double p, const std::vector<double>& taus,
                               std::optional<SpaceNorm> norm) {
  require_p(p);
  g.validate();
  const double dt = g.grid().dt;
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  const auto s = detail::gram_series(g, w);
  const auto integrals = detail::interval_integrals(s, p, g.reconstruction(), dt);
  ModulusCurve curve{{}, {}, CurveKind::Normality};
  for (double tau : taus) {
    const long long sigma = grid_steps(tau, dt);
    if (sigma <= 0) fail(ErrorCode::InvalidParameter, "offsets must be positive");
    if (tau > g.grid().span()) fail(ErrorCode::SpanTooShort, "offset longer than the span");
    const detail::WindowLayout layout{static_cast<std::size_t>(sigma), 0.0};
    const auto windows = detail::sliding_windows(s, integrals, layout, p, g.reconstruction(), dt);
    curve.taus.push_back(tau);
    curve.values.push_back(detail::max_of(windows));
  }
  curve.validate();
  return curve;
}

double exp_kernel_tail(const SpectralSignal& g, double p, double N, std::optional<SpaceNorm> norm) {
  require_p(p);
  if (!(N > 0.0) || !std::isfinite(N)) fail(ErrorCode::InvalidParameter, "N must be positive");
  g.validate();
  require_span(g, 1.0, "exponential kernel");
  const double dt = g.grid().dt;
  const Reconstruction r = g.reconstruction();
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  const auto s = detail::gram_series(g, w);
  const auto layout = detail::window_layout(1.0, dt);
  const std::size_t W = layout.full;
  const std::size_t n = g.count();
  const std::size_t first = W + (layout.frac > 0.0 ? 1 : 0);

  // decay[m] = exp(-N dt m): weight at the right end of the interval m steps back
  std::vector<double> decay(W + 1);
  for (std::size_t m = 0; m <= W; ++m) decay[m] = std::exp(-N * dt * static_cast<double>(m));
  const double full_factor = -std::expm1(-N * dt) / N;
  const double part_factor = -std::expm1(-N * dt * layout.frac) / N;

  std::vector<double> gauss_w;
  if (r == Reconstruction::PiecewiseLinear) {
    gauss_w.resize(4 * (W + 1));
    for (std::size_t m = 0; m <= W; ++m) {
      for (int q = 0; q < 4; ++q) {
        gauss_w[4 * m + q] = std::exp(-N * dt * (static_cast<double>(m) + 1.0 - detail::kGauss4Nodes[q]));
      }
    }
  }
  std::vector<double> pv;
  if (r == Reconstruction::PiecewiseConstant) {
    pv.resize(n);
    for (std::size_t k = 0; k < n; ++k) pv[k] = std::pow(s.sq[k], 0.5 * p);
  }
  auto pl_value = [&](std::size_t k, double t) {
    const double q = (1.0 - t) * (1.0 - t) * s.sq[k] + 2.0 * t * (1.0 - t) * s.cross[k] + t * t * s.sq[k + 1];
    return std::pow(std::max(q, 0.0), 0.5 * p);
  };

  double best = 0.0;
  for (std::size_t j = first; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t m = 0; m < W; ++m) {
      const std::size_t k = j - 1 - m;
      if (decay[m] == 0.0) break;
      if (r == Reconstruction::PiecewiseConstant) {
        sum += pv[k] * decay[m] * full_factor;
      } else {
        double acc = 0.0;
        for (int q = 0; q < 4; ++q) acc += detail::kGauss4Weights[q] * gauss_w[4 * m + q] * pl_value(k, detail::kGauss4Nodes[q]);
        sum += acc * dt;
      }
    }
    if (layout.frac > 0.0 && decay[W] > 0.0) {
      const std::size_t k = j - 1 - W;
      if (r == Reconstruction::PiecewiseConstant) {
        sum += pv[k] * decay[W] * part_factor;
      } else {
        double acc = 0.0;
        const double f0 = 1.0 - layout.frac;
        for (int q = 0; q < 4; ++q) {
          const double t = f0 + layout.frac * detail::kGauss4Nodes[q];
          acc += detail::kGauss4Weights[q] * std::exp(-N * dt * (static_cast<double>(W) + 1.0 - t)) * pl_value(k, t);
        }
        sum += acc * layout.frac * dt;
      }
    }
    best = std::max(best, sum);
  }
  return best;
}

SpectralSignal shift(const SpectralSignal& g, double s) {
  const long long sigma = grid_steps(s, g.grid().dt);
  const auto mag = static_cast<std::size_t>(sigma < 0 ? -sigma : sigma);
  if (mag + 2 > g.count()) fail(ErrorCode::SpanTooShort, "shifted span is empty");
  TimeGrid grid = g.grid();
  grid.count = g.count() - mag;
  const std::size_t from = sigma >= 0 ? mag : 0;
  if (sigma < 0) grid.t0 = g.grid().t0 + static_cast<double>(mag) * g.grid().dt;
  const std::size_t width = g.width();
  std::vector<double> data(g.data().begin() + static_cast<std::ptrdiff_t>(from * width),
                           g.data().begin() + static_cast<std::ptrdiff_t>((from + grid.count) * width));
  return SpectralSignal(grid, g.basis(), g.reconstruction(), std::move(data));
}

std::vector<double> sample_norms(const SpectralSignal& g, std::optional<SpaceNorm> norm) {
  const auto w = norm_weights(g.basis(), resolve(g, norm));
  std::vector<double> out(g.count());
  for (std::size_t k = 0; k < g.count(); ++k) out[k] = std::sqrt(weighted_inner(w, g.sample(k), g.sample(k)));
  return out;
}

}  // namespace alab
