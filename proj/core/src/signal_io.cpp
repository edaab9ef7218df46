#include "alab/signal_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "alab/error.hpp"

namespace alab {

namespace {

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "not a number: '" + token + "'");
  }
  if (used != token.size()) fail(ErrorCode::ParseError, "trailing characters in '" + token + "'");
  return v;
}

std::size_t parse_count(const std::string& token) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) fail(ErrorCode::ParseError, "bad integer '" + token + "'");
  return v;
}

BasisKind parse_basis(const std::string& s) {
  if (s == "DirichletSine") return BasisKind::DirichletSine;
  if (s == "TruncatedLineGrid") return BasisKind::TruncatedLineGrid;
  fail(ErrorCode::ParseError, "unknown basis '" + s + "'");
}

Reconstruction parse_reconstruction(const std::string& s) {
  if (s == "PiecewiseConstant") return Reconstruction::PiecewiseConstant;
  if (s == "PiecewiseLinear") return Reconstruction::PiecewiseLinear;
  fail(ErrorCode::ParseError, "unknown reconstruction '" + s + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(ErrorCode::InvalidSignal, "cannot format value");
  return std::string(buf, ptr);
}

void write_signal(std::ostream& out, const SpectralSignal& g) {
  const auto& b = g.basis();
  out << "# basis=" << to_string(b.kind) << " modes=" << b.modeCount << " t0=" << format_real(g.grid().t0)
      << " dt=" << format_real(g.grid().dt) << " count=" << g.count()
      << " reconstruction=" << to_string(g.reconstruction());
  if (b.components != 1) out << " components=" << b.components;
  if (b.kind == BasisKind::TruncatedLineGrid) out << " L=" << format_real(b.halfLength);
  out << '\n';
  std::string line;
  for (std::size_t k = 0; k < g.count(); ++k) {
    line = format_real(g.time(k));
    for (double c : g.sample(k)) {
      line += ' ';
      line += format_real(c);
    }
    line += '\n';
    out << line;
  }
}

SpectralSignal read_signal(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0) fail(ErrorCode::ParseError, "missing header line");
  std::map<std::string, std::string> keys;
  std::istringstream hs(header.substr(2));
  std::string item;
  while (hs >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "malformed header item '" + item + "'");
    keys[item.substr(0, eq)] = item.substr(eq + 1);
  }
  for (const char* k : {"basis", "modes", "t0", "dt", "count", "reconstruction"}) {
    if (!keys.count(k)) fail(ErrorCode::ParseError, std::string("header lacks ") + k);
  }
  BasisDescriptor basis;
  basis.kind = parse_basis(keys["basis"]);
  basis.modeCount = parse_count(keys["modes"]);
  if (keys.count("components")) basis.components = parse_count(keys["components"]);
  if (keys.count("L")) basis.halfLength = parse_real(keys["L"]);
  basis.validate();
  TimeGrid grid{parse_real(keys["t0"]), parse_real(keys["dt"]), parse_count(keys["count"])};
  grid.validate();
  const auto recon = parse_reconstruction(keys["reconstruction"]);

  const std::size_t width = basis.width();
  std::vector<double> data;
  data.reserve(grid.count * width);
  std::string line, token;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t fields = 0;
    while (ls >> token) {
      const double v = parse_real(token);
      if (fields > 0) data.push_back(v);
      ++fields;
    }
    if (fields != width + 1) fail(ErrorCode::ParseError, "row " + std::to_string(rows) + " has wrong width");
    ++rows;
  }
  if (rows != grid.count) fail(ErrorCode::ParseError, "row count does not match header");
  SpectralSignal g(grid, basis, recon, std::move(data));
  g.validate();
  return g;
}

void save_signal(const std::string& path, const SpectralSignal& g) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidParameter, "cannot write " + path);
  write_signal(out, g);
}

SpectralSignal load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidParameter, "cannot read " + path);
  return read_signal(in);
}

void write_curve(std::ostream& out, const ModulusCurve& c) {
  out << "tau,value\n";
  for (std::size_t i = 0; i < c.size(); ++i) out << format_real(c.taus[i]) << ',' << format_real(c.values[i]) << '\n';
}

ModulusCurve read_curve(std::istream& in, CurveKind kind) {
  std::string line;
  if (!std::getline(in, line) || line != "tau,value") fail(ErrorCode::ParseError, "curve header must be tau,value");
  ModulusCurve c{{}, {}, kind};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorCode::ParseError, "curve row lacks a comma");
    c.taus.push_back(parse_real(line.substr(0, comma)));
    c.values.push_back(parse_real(line.substr(comma + 1)));
  }
  c.validate();
  return c;
}

}  // namespace alab
