#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace alab {

struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t count = 0;

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double end() const { return time(count - 1); }
  double span() const { return static_cast<double>(count - 1) * dt; }
  void validate() const;

  // Number of samples needed to cover [t0, t0 + length].
  static std::size_t samples_for(double length, double dt);
};

enum class BasisKind { DirichletSine, TruncatedLineGrid };

// DirichletSine: coefficient n multiplies sin(nx) on (-pi, pi).
// TruncatedLineGrid: nodal values on [-L, L], modeCount = number of nodes.
// components = 2 stores (position, velocity) blocks back to back.
struct BasisDescriptor {
  BasisKind kind = BasisKind::DirichletSine;
  std::size_t modeCount = 1;
  std::size_t components = 1;
  double halfLength = 0.0;

  static BasisDescriptor sine(std::size_t modes, std::size_t components = 1);
  static BasisDescriptor line(double L, std::size_t nodes);

  std::size_t width() const { return modeCount * components; }
  double dx() const;
  double node(std::size_t j) const;
  void validate() const;
  bool operator==(const BasisDescriptor&) const = default;
};

enum class Reconstruction { PiecewiseConstant, PiecewiseLinear };

enum class SpaceNorm { L2, H1, Hminus1, Energy, L2Line };

std::string_view to_string(BasisKind kind);
std::string_view to_string(Reconstruction r);
std::string_view to_string(SpaceNorm n);

SpaceNorm default_norm(const BasisDescriptor& basis);

// Diagonal weights w with ||u||^2 = sum_i w_i u_i^2.
std::vector<double> norm_weights(const BasisDescriptor& basis, SpaceNorm norm);

double weighted_inner(std::span<const double> w, std::span<const double> a, std::span<const double> b);

class SpectralSignal {
 public:
  SpectralSignal() = default;
  SpectralSignal(TimeGrid grid, BasisDescriptor basis, Reconstruction reconstruction);
  SpectralSignal(TimeGrid grid, BasisDescriptor basis, Reconstruction reconstruction,
                 std::vector<double> coeffs);

  const TimeGrid& grid() const { return grid_; }
  const BasisDescriptor& basis() const { return basis_; }
  Reconstruction reconstruction() const { return reconstruction_; }
  std::size_t count() const { return grid_.count; }
  std::size_t width() const { return basis_.width(); }
  double time(std::size_t k) const { return grid_.time(k); }

  std::span<const double> sample(std::size_t k) const;
  std::span<double> sample(std::size_t k);
  const std::vector<double>& data() const { return coeffs_; }
  std::vector<double>& data() { return coeffs_; }

  // Throws InvalidSignal on non-finite entries.
  void validate() const;

  // Value of the reconstruction at an arbitrary time inside the span.
  std::vector<double> value_at(double t) const;

 private:
  TimeGrid grid_;
  BasisDescriptor basis_;
  Reconstruction reconstruction_ = Reconstruction::PiecewiseConstant;
  std::vector<double> coeffs_;
};

enum class CurveKind { Continuity, Normality, ExpKernel, Tail, SpatialTail, Residual, Entropy };

std::string_view to_string(CurveKind kind);

struct ModulusCurve {
  std::vector<double> taus;
  std::vector<double> values;
  CurveKind kind = CurveKind::Continuity;

  void validate() const;
  std::size_t size() const { return taus.size(); }
};

// Converts a grid-aligned offset to a sample count; throws MisalignedOffset.
long long grid_steps(double offset, double dt);

double lpb_norm(const SpectralSignal& g, double p, std::optional<SpaceNorm> norm = {});

// Integral of ||g||^p over [t, t+1] for a grid-aligned start t.
double unit_window_integral(const SpectralSignal& g, double p, double t,
                            std::optional<SpaceNorm> norm = {});

// Window integrals over every admissible grid-aligned start, in index order.
std::vector<double> unit_window_integrals(const SpectralSignal& g, double p,
                                          std::optional<SpaceNorm> norm = {});

ModulusCurve modulus_of_continuity(const SpectralSignal& g, double p, const std::vector<double>& taus,
                                   std::optional<SpaceNorm> norm = {});

ModulusCurve normality_modulus(const SpectralSignal& g, double p, const std::vector<double>& taus,
                               std::optional<SpaceNorm> norm = {});

double exp_kernel_tail(const SpectralSignal& g, double p, double N, std::optional<SpaceNorm> norm = {});

SpectralSignal shift(const SpectralSignal& g, double s);

// Pointwise ||g(t_k)|| in the chosen norm.
std::vector<double> sample_norms(const SpectralSignal& g, std::optional<SpaceNorm> norm = {});

}  // namespace alab
