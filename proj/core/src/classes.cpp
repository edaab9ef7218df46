#include "alab/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "alab/error.hpp"
#include "alab/line_modes.hpp"
#include "window.hpp"

namespace alab {

namespace {

double bump_raw(double z) { return (z <= 0.0 || z >= 1.0) ? 0.0 : std::exp(-1.0 / (z * (1.0 - z))); }

double bump_mass() {
  // All derivatives vanish at the endpoints, so the trapezoid rule converges rapidly.
  static const double mass = [] {
    const int n = 4096;
    double s = 0.0;
    for (int i = 1; i < n; ++i) s += bump_raw(static_cast<double>(i) / n);
    return s / n;
  }();
  return mass;
}

std::size_t aligned_steps(double len, double dt, const char* what) {
  long long steps = 0;
  try {
    steps = grid_steps(len, dt);
  } catch (const Error&) {
    fail(ErrorCode::InvalidParameter, std::string(what) + " is not a multiple of dt");
  }
  return static_cast<std::size_t>(std::max(0LL, steps));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Coefficients in an orthogonal mode basis with diagonal weights.
struct ModalView {
  SpectralSignal coeffs;
  std::vector<double> weights;
  std::vector<std::size_t> mode;  // 1-based mode index per entry
  std::size_t modes = 0;
};

ModalView modal_view(const SpectralSignal& g, SpaceNorm norm) {
  ModalView v;
  const auto& b = g.basis();
  if (b.kind == BasisKind::DirichletSine) {
    v.coeffs = g;
    v.weights = norm_weights(b, norm);
    v.modes = b.modeCount;
    v.mode.resize(b.width());
    for (std::size_t i = 0; i < b.width(); ++i) v.mode[i] = i % b.modeCount + 1;
    return v;
  }
  const LineModes modes(b);
  const std::size_t K = modes.mode_count();
  std::vector<double> data(g.count() * K);
  for (std::size_t k = 0; k < g.count(); ++k) modes.analyze(g.sample(k), {data.data() + k * K, K});
  v.coeffs = SpectralSignal(g.grid(), BasisDescriptor::sine(K), g.reconstruction(), std::move(data));
  v.weights.assign(K, modes.mode_norm_sq());
  v.modes = K;
  v.mode.resize(K);
  for (std::size_t i = 0; i < K; ++i) v.mode[i] = i + 1;
  return v;
}

std::vector<double> masked_above(const ModalView& v, std::size_t M) {
  std::vector<double> w = v.weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (v.mode[i] <= M) w[i] = 0.0;
  }
  return w;
}

double unit_sup(const detail::GramSeries& s, double p, Reconstruction r, double dt) {
  const auto integrals = detail::interval_integrals(s, p, r, dt);
  return detail::max_of(detail::sliding_windows(s, integrals, detail::window_layout(1.0, dt), p, r, dt));
}

double short_sup(const detail::GramSeries& s, const std::vector<double>& integrals, std::size_t steps, double p,
                 Reconstruction r, double dt) {
  return detail::max_of(detail::sliding_windows(s, integrals, {steps, 0.0}, p, r, dt));
}

void set_measured(ClassEvidence& e, Verdict v) {
  e.measured = v;
  e.holds = v;
}

}  // namespace

double mollifier(double z) { return bump_raw(z) / bump_mass(); }

SpectralSignal mollify(const SpectralSignal& g, double eps) {
  g.validate();
  const double dt = g.grid().dt;
  if (!(eps > 0.0)) fail(ErrorCode::InvalidParameter, "eps must be positive");
  const std::size_t E = aligned_steps(eps, dt, "eps");
  if (E < 2) fail(ErrorCode::InvalidParameter, "eps must be at least 2 dt");
  if (E + 2 > g.count()) fail(ErrorCode::InvalidParameter, "span too short for the mollifier");

  std::vector<double> w(E);
  double total = 0.0;
  for (std::size_t j = 0; j < E; ++j) {
    w[j] = mollifier((static_cast<double>(j) + 0.5) / static_cast<double>(E));
    total += w[j];
  }
  for (double& x : w) x /= total;

  TimeGrid grid = g.grid();
  grid.count = g.count() - E;
  grid.t0 = g.grid().t0 + static_cast<double>(E) * dt;
  SpectralSignal out(grid, g.basis(), g.reconstruction());
  const bool linear = g.reconstruction() == Reconstruction::PiecewiseLinear;
  const std::size_t width = g.width();
  for (std::size_t k = 0; k < grid.count; ++k) {
    auto dst = out.sample(k);
    for (std::size_t j = 0; j < E; ++j) {
      const std::size_t left = k + E - j - 1;
      auto a = g.sample(left);
      if (linear) {
        auto b = g.sample(left + 1);
        for (std::size_t i = 0; i < width; ++i) dst[i] += w[j] * 0.5 * (a[i] + b[i]);
      } else {
        for (std::size_t i = 0; i < width; ++i) dst[i] += w[j] * a[i];
      }
    }
  }
  return out;
}

SpectralSignal time_average(const SpectralSignal& g, double h) {
  g.validate();
  const double dt = g.grid().dt;
  if (!(h > 0.0)) fail(ErrorCode::InvalidParameter, "h must be positive");
  const std::size_t H = aligned_steps(h, dt, "h");
  if (H < 1) fail(ErrorCode::InvalidParameter, "h must be at least dt");
  if (H + 2 > g.count()) fail(ErrorCode::InvalidParameter, "span too short for the average");

  TimeGrid grid = g.grid();
  grid.count = g.count() - H;
  SpectralSignal out(grid, g.basis(), g.reconstruction());
  const bool linear = g.reconstruction() == Reconstruction::PiecewiseLinear;
  const std::size_t width = g.width();
  const double scale = 1.0 / static_cast<double>(H);
  for (std::size_t k = 0; k < grid.count; ++k) {
    auto dst = out.sample(k);
    for (std::size_t m = k; m < k + H; ++m) {
      auto a = g.sample(m);
      if (linear) {
        auto b = g.sample(m + 1);
        for (std::size_t i = 0; i < width; ++i) dst[i] += 0.5 * (a[i] + b[i]);
      } else {
        for (std::size_t i = 0; i < width; ++i) dst[i] += a[i];
      }
    }
    for (double& x : dst) x *= scale;
  }
  return out;
}

SpectralSignal truncate_amplitude(const SpectralSignal& g, double N, std::optional<SpaceNorm> norm) {
  g.validate();
  if (!(N > 0.0)) fail(ErrorCode::InvalidParameter, "N must be positive");
  const auto w = norm_weights(g.basis(), norm ? *norm : default_norm(g.basis()));
  SpectralSignal out = g;
  for (std::size_t k = 0; k < g.count(); ++k) {
    auto s = out.sample(k);
    if (std::sqrt(weighted_inner(w, s, s)) > N) std::fill(s.begin(), s.end(), 0.0);
  }
  return out;
}

SpectralSignal project_finite_rank(const SpectralSignal& g, std::size_t M) {
  g.validate();
  const auto& b = g.basis();
  SpectralSignal out = g;
  if (b.kind == BasisKind::DirichletSine) {
    if (M < 1 || M > b.modeCount) fail(ErrorCode::InvalidParameter, "M outside 1..modeCount");
    for (std::size_t k = 0; k < g.count(); ++k) {
      auto s = out.sample(k);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i % b.modeCount + 1 > M) s[i] = 0.0;
      }
    }
    return out;
  }
  const LineModes modes(b);
  if (M < 1 || M > modes.mode_count()) fail(ErrorCode::InvalidParameter, "M outside the grid mode range");
  for (std::size_t k = 0; k < g.count(); ++k) modes.truncate(out.sample(k), M);
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(ForceClass c) {
  switch (c) {
    case ForceClass::TranslationBounded: return "translation-bounded";
    case ForceClass::TimeRegular: return "time-regular";
    case ForceClass::SpaceRegular: return "space-regular";
    case ForceClass::Normal: return "normal";
    case ForceClass::StronglyNormal: return "strongly-normal";
    case ForceClass::WeaklyNormal: return "weakly-normal";
    case ForceClass::TranslationCompact: return "translation-compact";
  }
  return "";
}

Verdict decide_decay(double limit, double curveMax, double decay, const ClassThresholds& th) {
  if (limit <= decay) return Verdict::Yes;
  if (limit >= th.floorFactor * decay && limit >= th.retention * curveMax) return Verdict::No;
  return Verdict::Inconclusive;
}

std::vector<double> tau_ladder(const TimeGrid& grid) {
  std::vector<double> taus;
  for (double tau = 2.0 * grid.dt; tau <= 1.0 + 1e-12 && tau < grid.span() - 1.0; tau *= 2.0) taus.push_back(tau);
  return taus;
}

std::vector<std::size_t> mode_ladder(std::size_t available) {
  std::vector<std::size_t> Ms;
  const std::size_t top = available > 1 ? available - 1 : 1;
  for (std::size_t M = 1; M < top; M *= 2) Ms.push_back(M);
  if (Ms.empty() || Ms.back() != top) Ms.push_back(top);
  return Ms;
}

namespace {

struct Edge {
  ForceClass from;
  ForceClass to;
};

// Implications "from = yes => to = yes"; contrapositives propagate "no" backwards.
constexpr Edge kEdges[] = {
    {ForceClass::StronglyNormal, ForceClass::Normal},   {ForceClass::TimeRegular, ForceClass::StronglyNormal},
    {ForceClass::TimeRegular, ForceClass::WeaklyNormal}, {ForceClass::SpaceRegular, ForceClass::WeaklyNormal},
    {ForceClass::Normal, ForceClass::WeaklyNormal},
};

Verdict tri_and(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Yes && b == Verdict::Yes) return Verdict::Yes;
  return Verdict::Inconclusive;
}

void propagate(ClassReport& report) {
  auto apply = [&](ForceClass target, Verdict v, ForceClass because) {
    ClassEvidence& e = report.at(target);
    if (e.holds == v) return false;
    if (e.holds == Verdict::Inconclusive) {
      e.holds = v;
      e.note += std::string(e.note.empty() ? "" : "; ") + "set by implication from " + std::string(to_string(because));
      return true;
    }
    const std::string msg = std::string(to_string(target)) + " measured " + std::string(to_string(e.holds)) +
                            " but " + std::string(to_string(because)) + " implies " + std::string(to_string(v));
    if (std::find(report.conflicts.begin(), report.conflicts.end(), msg) == report.conflicts.end()) {
      report.conflicts.push_back(msg);
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& edge : kEdges) {
      if (report.verdict(edge.from) == Verdict::Yes) changed |= apply(edge.to, Verdict::Yes, edge.from);
      if (report.verdict(edge.to) == Verdict::No) changed |= apply(edge.from, Verdict::No, edge.to);
    }
  }
  ClassEvidence& tc = report.at(ForceClass::TranslationCompact);
  tc.holds = tri_and(report.verdict(ForceClass::TimeRegular), report.verdict(ForceClass::SpaceRegular));
  tc.measured = tc.holds;
  tc.rule = "time-regular AND space-regular";
}

}  // namespace

ClassReport classify(const SpectralSignal& g, double p, const ClassThresholds& th) {
  g.validate();
  if (g.grid().span() < 4.0) fail(ErrorCode::SpanTooShort, "classification needs a span of at least 4");
  const SpaceNorm norm = th.norm ? *th.norm : default_norm(g.basis());
  const double dt = g.grid().dt;
  const Reconstruction rec = g.reconstruction();

  ClassReport report;
  report.p = p;
  report.thresholds = th;

  const auto windows = unit_window_integrals(g, p, norm);
  const double mass_max = detail::max_of(windows);
  report.lpb = std::pow(mass_max, 1.0 / p);
  const double decay = th.decayFactor * mass_max;
  report.decay = decay;
  for (auto& e : report.classes) e.threshold = decay;

  // translation-bounded: growth of window mass against the first unit of activity
  {
    ClassEvidence& e = report.at(ForceClass::TranslationBounded);
    e.rule = "max window mass / max over the first active unit <= growthFactor";
    e.threshold = th.growthFactor;
    std::size_t first = windows.size();
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (windows[i] > 1e-12 * mass_max) {
        first = i;
        break;
      }
    }
    double growth = 1.0;
    if (first < windows.size()) {
      const std::size_t reach = std::min(windows.size(), first + detail::window_layout(1.0, dt).full + 1);
      double base = 0.0;
      for (std::size_t i = first; i < reach; ++i) base = std::max(base, windows[i]);
      growth = mass_max / base;
    }
    e.curve.kind = CurveKind::Residual;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      e.curve.taus.push_back(g.time(i) - g.grid().t0 + dt);
      e.curve.values.push_back(windows[i]);
    }
    e.limitValue = growth;
    set_measured(e, growth > th.growthFactor ? Verdict::No : Verdict::Yes);
  }

  const auto taus = tau_ladder(g.grid());
  if (taus.empty()) fail(ErrorCode::SpanTooShort, "grid too coarse for the offset ladder");

  {
    ClassEvidence& e = report.at(ForceClass::TimeRegular);
    e.rule = "continuity modulus at the smallest offset";
    e.curve = modulus_of_continuity(g, p, taus, norm);
    e.limitValue = e.curve.values.front();
    set_measured(e, decide_decay(e.limitValue, detail::max_of(e.curve.values), decay, th));
  }
  {
    ClassEvidence& e = report.at(ForceClass::Normal);
    e.rule = "normality modulus at the smallest offset";
    e.curve = normality_modulus(g, p, taus, norm);
    e.limitValue = e.curve.values.front();
    set_measured(e, decide_decay(e.limitValue, detail::max_of(e.curve.values), decay, th));
  }

  const ModalView view = modal_view(g, norm);
  const auto Ms = mode_ladder(view.modes);
  std::vector<detail::GramSeries> residuals;
  residuals.reserve(Ms.size());
  for (std::size_t M : Ms) residuals.push_back(detail::gram_series(view.coeffs, masked_above(view, M)));

  {
    ClassEvidence& e = report.at(ForceClass::SpaceRegular);
    e.rule = "lpb of the residual after keeping modes <= M, at the largest M";
    e.curve.kind = CurveKind::Residual;
    for (std::size_t i = 0; i < Ms.size(); ++i) {
      e.curve.taus.push_back(static_cast<double>(Ms[i]));
      e.curve.values.push_back(unit_sup(residuals[i], p, rec, dt));
    }
    e.limitValue = e.curve.values.back();
    set_measured(e, decide_decay(e.limitValue, detail::max_of(e.curve.values), decay, th));
  }

  {
    ClassEvidence& e = report.at(ForceClass::StronglyNormal);
    const auto full = detail::gram_series(g, norm_weights(g.basis(), norm));
    const double nres = std::pow(mass_max / (2.0 * taus.front()), 1.0 / p);
    std::vector<double> Ns;
    for (double N = report.lpb; N < nres && N > 0.0; N *= 2.0) Ns.push_back(N);
    if (Ns.empty() || Ns.back() < nres) Ns.push_back(nres);
    e.rule = "lpb of the amplitude-truncation residual at N = " + fmt(nres);
    e.curve.kind = CurveKind::Residual;
    for (double N : Ns) {
      detail::GramSeries r = full;
      const std::size_t n = r.sq.size();
      std::vector<char> removed(n);
      for (std::size_t k = 0; k < n; ++k) removed[k] = std::sqrt(full.sq[k]) > N;
      for (std::size_t k = 0; k < n; ++k) {
        if (!removed[k]) r.sq[k] = 0.0;
      }
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!(removed[k] && removed[k + 1])) r.cross[k] = 0.0;
      }
      e.curve.taus.push_back(N);
      e.curve.values.push_back(unit_sup(r, p, rec, dt));
    }
    e.limitValue = e.curve.values.back();
    set_measured(e, decide_decay(e.limitValue, detail::max_of(e.curve.values), decay, th));
  }

  {
    ClassEvidence& e = report.at(ForceClass::WeaklyNormal);
    e.rule = "min over (M, tau) ladders of sup_t int_t^{t+tau} ||g - P_M g||^p";
    e.curve.kind = CurveKind::Residual;
    double best = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::size_t bestM = 0;
    double bestTau = 0.0;
    for (std::size_t i = 0; i < Ms.size(); ++i) {
      const auto integrals = detail::interval_integrals(residuals[i], p, rec, dt);
      double rowMin = std::numeric_limits<double>::infinity();
      for (double tau : taus) {
        const double v = short_sup(residuals[i], integrals, static_cast<std::size_t>(grid_steps(tau, dt)), p, rec, dt);
        worst = std::max(worst, v);
        rowMin = std::min(rowMin, v);
        if (v < best) {
          best = v;
          bestM = Ms[i];
          bestTau = tau;
        }
      }
      e.curve.taus.push_back(static_cast<double>(Ms[i]));
      e.curve.values.push_back(rowMin);
    }
    e.limitValue = best;
    e.note = "best pair M=" + std::to_string(bestM) + " tau=" + fmt(bestTau);
    set_measured(e, decide_decay(best, worst, decay, th));
    if (e.measured == Verdict::Yes) e.note += "; sufficient-evidence only";
  }

  if (g.basis().kind == BasisKind::TruncatedLineGrid) {
    ClassEvidence e;
    e.rule = "lpb of g restricted to |x| > R at the largest R";
    e.threshold = decay;
    e.curve.kind = CurveKind::SpatialTail;
    const auto& b = g.basis();
    const auto base = norm_weights(b, SpaceNorm::L2Line);
    for (int j = 1; j <= 6; ++j) {
      const double R = b.halfLength * j / 8.0;
      std::vector<double> w = base;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(b.node(i)) <= R) w[i] = 0.0;
      }
      e.curve.taus.push_back(R);
      e.curve.values.push_back(unit_sup(detail::gram_series(g, w), p, rec, dt));
    }
    e.limitValue = e.curve.values.back();
    set_measured(e, decide_decay(e.limitValue, detail::max_of(e.curve.values), decay, th));
    report.uniformTail = std::move(e);
  }

  propagate(report);
  return report;
}

std::vector<std::string> lattice_violations(const ClassReport& r) {
  std::vector<std::string> out;
  auto need = [&](ForceClass a, ForceClass b) {
    if (r.verdict(a) == Verdict::Yes && r.verdict(b) != Verdict::Yes) {
      out.push_back(std::string(to_string(a)) + " = yes but " + std::string(to_string(b)) + " = " +
                    std::string(to_string(r.verdict(b))));
    }
  };
  need(ForceClass::StronglyNormal, ForceClass::Normal);
  need(ForceClass::TimeRegular, ForceClass::StronglyNormal);
  need(ForceClass::TimeRegular, ForceClass::WeaklyNormal);
  need(ForceClass::SpaceRegular, ForceClass::WeaklyNormal);
  need(ForceClass::Normal, ForceClass::WeaklyNormal);
  need(ForceClass::StronglyNormal, ForceClass::WeaklyNormal);
  const Verdict tc = tri_and(r.verdict(ForceClass::TimeRegular), r.verdict(ForceClass::SpaceRegular));
  if (r.verdict(ForceClass::TranslationCompact) != tc) {
    out.push_back("translation-compact differs from time-regular AND space-regular");
  }
  for (const auto& c : r.conflicts) out.push_back("conflict: " + c);
  return out;
}

}  // namespace alab
