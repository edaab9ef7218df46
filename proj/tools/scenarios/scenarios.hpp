#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "alab/classes.hpp"
#include "alab/compactness.hpp"
#include "alab/gallery.hpp"

namespace alab::scenarios {

// Flat numeric parameters; `key = value` lines, '#' starts a comment.
class Params {
 public:
  double get(const std::string& key, double fallback) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, double value) { values_[key] = value; }
  // Parses "key=value"; throws ParseError on malformed input.
  void set_assignment(std::string_view text);
  void merge_config(std::istream& in);
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct Outcome {
  std::string name;
  std::vector<std::string> lines;  // headline numbers, in order
  std::vector<Check> checks;
  std::map<std::string, std::string> files;  // file name -> contents

  bool passed() const;
  std::string summary() const;
};

const std::vector<std::string>& scenario_names();

// Throws alab::Error for unknown names or rejected parameters.
Outcome run(const std::string& name, const Params& params);

// Writes every file of the outcome plus `summary.txt` into dir.
void write_outcome(const Outcome& outcome, const std::string& dir);

// Structured report `{class: {holds, measured, evidence_file, threshold, ...}}`; curves go to files.
std::string class_report_json(const ClassReport& report, const std::string& prefix,
                              std::map<std::string, std::string>& files);

std::string compactness_files(const CompactnessReport& report, std::map<std::string, std::string>& files);

}  // namespace alab::scenarios
