#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "alab/classes.hpp"
#include "alab/compactness.hpp"
#include "alab/error.hpp"
#include "alab/gallery.hpp"
#include "alab/signal_io.hpp"
#include "scenarios.hpp"

namespace {

using alab::scenarios::Params;

struct Common {
  std::string out;
  std::string config;
  std::vector<std::string> sets;
  bool seedless = false;
};

// Numeric flags shared by every verb; unset flags never override config values.
struct NumericFlags {
  std::optional<double> nmax, dt, modes, L, alpha, gamma, p;

  void add(CLI::App* app) {
    app->add_option("--nmax", nmax, "number of forced modes");
    app->add_option("--dt", dt, "time step");
    app->add_option("--modes", modes, "sine modes or line-grid nodes");
    app->add_option("--L", L, "half-length of the line grid");
    app->add_option("--alpha", alpha, "damping alpha");
    app->add_option("--gamma", gamma, "wave damping gamma");
    app->add_option("--p", p, "integrability exponent");
  }

  void apply(Params& P) const {
    auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) P.set(key, *v);
    };
    put("nmax", nmax);
    put("dt", dt);
    put("modes", modes);
    put("L", L);
    put("alpha", alpha);
    put("gamma", gamma);
    put("p", p);
  }
};

Params collect(const Common& c, const NumericFlags& f) {
  Params P;
  if (!c.config.empty()) {
    std::ifstream in(c.config);
    if (!in) alab::fail(alab::ErrorCode::InvalidParameter, "cannot open config " + c.config);
    P.merge_config(in);
  }
  for (const auto& s : c.sets) P.set_assignment(s);
  f.apply(P);
  return P;
}

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) alab::fail(alab::ErrorCode::InvalidParameter, "cannot write " + path);
  out << text;
}

alab::NormKind parse_norm(const std::string& s) {
  for (auto k : {alab::NormKind::L2, alab::NormKind::H1, alab::NormKind::EnergyE, alab::NormKind::L2Line}) {
    if (alab::to_string(k) == s) return k;
  }
  alab::fail(alab::ErrorCode::InvalidParameter, "unknown norm '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alab: forcing classes, Galerkin solvers and compactness diagnostics"};
  app.require_subcommand(1);
  Common common;
  NumericFlags flags;

  auto* run = app.add_subcommand("run", "run a scenario and write its reports");
  std::string scenario;
  run->add_option("scenario", scenario, "scenario name")->required();
  run->add_option("--out", common.out, "output directory");
  run->add_option("--config", common.config, "key = value parameter file");
  run->add_option("--set", common.sets, "extra parameter key=value (repeatable)");
  run->add_flag("--seedless", common.seedless, "assert that no randomness is used");
  flags.add(run);

  auto* gallery = app.add_subcommand("gallery", "list or emit gallery forces");
  gallery->require_subcommand(1);
  auto* glist = gallery->add_subcommand("list", "list forces and scenarios");
  auto* emit = gallery->add_subcommand("emit", "write a gallery force in the signal format");
  std::string force;
  double span = 0.0;
  double width = 1.0;
  emit->add_option("--force", force, "force name")->required();
  emit->add_option("--out", common.out, "output file (stdout when omitted)");
  emit->add_option("--span", span, "time span (gallery default when omitted)");
  emit->add_option("--width", width, "bump half-width");
  flags.add(emit);

  auto* cls = app.add_subcommand("classify", "classify a signal file");
  std::string signalFile;
  cls->add_option("signal-file", signalFile, "signal in the columnar text format")->required()->check(CLI::ExistingFile);
  cls->add_option("--out", common.out, "directory for the JSON report and curves");
  flags.add(cls);

  auto* probe = app.add_subcommand("probe", "compactness diagnostics of a trajectory file");
  std::string trajFile, norm;
  std::size_t stride = 1;
  probe->add_option("trajectory-file", trajFile, "trajectory in the columnar text format")->required()->check(CLI::ExistingFile);
  probe->add_option("--norm", norm, "L2, H1, EnergyE or L2Line (basis default when omitted)");
  probe->add_option("--stride", stride, "use every stride-th sample")->check(CLI::PositiveNumber);
  probe->add_option("--out", common.out, "directory for compactness.txt, tail.csv, entropy.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const Params P = collect(common, flags);
      alab::scenarios::Outcome o = alab::scenarios::run(scenario, P);
      if (common.seedless) o.lines.push_back("seedless: no random number generation is used");
      std::string params;
      for (const auto& [k, v] : P.values()) params += " " + k + "=" + alab::format_real(v);
      if (!params.empty()) o.lines.insert(o.lines.begin(), "params:" + params);
      if (!common.out.empty()) alab::scenarios::write_outcome(o, common.out);
      std::cout << o.summary();
      for (const auto& c : o.checks) {
        if (!c.pass) std::cerr << "failed check: " << c.label << '\n';
      }
      return o.passed() ? 0 : 1;
    }
    if (glist->parsed()) {
      std::cout << "forces:\n";
      for (auto n : alab::kAllForces) std::cout << "  " << alab::to_string(n) << '\n';
      std::cout << "scenarios:\n";
      for (const auto& s : alab::scenarios::scenario_names()) std::cout << "  " << s << '\n';
      return 0;
    }
    if (emit->parsed()) {
      alab::ForceSpec spec;
      spec.name = alab::parse_force_name(force);
      if (flags.nmax) spec.nmax = static_cast<std::size_t>(*flags.nmax);
      if (flags.alpha) spec.alpha = *flags.alpha;
      spec.width = width;
      auto d = alab::gallery_defaults(spec);
      if (flags.dt) d.grid.dt = *flags.dt;
      if (flags.modes || flags.L) {
        if (d.basis.kind == alab::BasisKind::TruncatedLineGrid) {
          d.basis = alab::BasisDescriptor::line(flags.L.value_or(d.basis.halfLength),
                                                static_cast<std::size_t>(flags.modes.value_or(d.basis.modeCount)));
        } else if (flags.modes) {
          d.basis = alab::BasisDescriptor::sine(static_cast<std::size_t>(*flags.modes));
        }
      }
      const double length = span > 0.0 ? span : alab::gallery_defaults(spec).grid.span();
      d.grid.count = alab::TimeGrid::samples_for(length, d.grid.dt);
      const auto g = alab::generate(spec, d.grid, d.basis);
      if (common.out.empty()) {
        alab::write_signal(std::cout, g);
      } else {
        alab::save_signal(common.out, g);
      }
      return 0;
    }
    if (cls->parsed()) {
      const auto g = alab::load_signal(signalFile);
      const auto r = alab::classify(g, flags.p.value_or(2.0));
      for (auto c : alab::kAllClasses) {
        const auto& e = r.at(c);
        std::cout << alab::to_string(c) << ": " << alab::to_string(e.holds) << " (limit " << alab::format_real(e.limitValue)
                  << ", threshold " << alab::format_real(e.threshold) << ")\n";
      }
      if (r.uniformTail) std::cout << "uniform-tail: " << alab::to_string(r.uniformTail->holds) << '\n';
      const auto bad = alab::lattice_violations(r);
      std::cout << "lattice violations: " << bad.size() << '\n';
      if (!common.out.empty()) {
        std::map<std::string, std::string> files;
        files["class_report.json"] = alab::scenarios::class_report_json(r, "class_", files);
        for (const auto& [f, text] : files) write_file((std::filesystem::path(common.out) / f).string(), text);
      }
      return bad.empty() ? 0 : 1;
    }
    if (probe->parsed()) {
      const auto traj = alab::load_signal(trajFile);
      alab::NormKind kind = alab::NormKind::L2;
      if (!norm.empty()) {
        kind = parse_norm(norm);
      } else if (traj.basis().kind == alab::BasisKind::TruncatedLineGrid) {
        kind = alab::NormKind::L2Line;
      } else if (traj.basis().components == 2) {
        kind = alab::NormKind::EnergyE;
      }
      const auto cloud = alab::TrajectoryCloud::from_signal(traj, kind, stride);
      const auto rep = alab::verdict(cloud);
      std::map<std::string, std::string> files;
      std::cout << alab::scenarios::compactness_files(rep, files);
      if (!common.out.empty()) {
        for (const auto& [f, text] : files) write_file((std::filesystem::path(common.out) / f).string(), text);
      }
      return 0;
    }
  } catch (const alab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
