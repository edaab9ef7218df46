#pragma once

#include <iosfwd>
#include <string>

#include "alab/signal.hpp"

namespace alab {

// Shortest decimal form that reads back to the same double.
std::string format_real(double v);

void write_signal(std::ostream& out, const SpectralSignal& g);
SpectralSignal read_signal(std::istream& in);

void save_signal(const std::string& path, const SpectralSignal& g);
SpectralSignal load_signal(const std::string& path);

// CSV with header `tau,value`.
void write_curve(std::ostream& out, const ModulusCurve& c);
ModulusCurve read_curve(std::istream& in, CurveKind kind);

}  // namespace alab
