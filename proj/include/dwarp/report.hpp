// dwarp - residual report types shared by the classification operations

#ifndef DWARP_REPORT_HPP_
#define DWARP_REPORT_HPP_

#include <map>
#include <string>
#include <vector>

#include "dwarp/chart.hpp"

namespace dwarp {

struct SampleRow {
  Point point;
  double residual = 0.0;
  std::map<std::string, double> values;  // named per-sample diagnostics
};

// Residual table over sample points with a verdict. `pass` is true when the
// verdict affirms the property being tested; inconclusive or failed
// preconditions still produce a report.
struct ClassificationReport {
  std::string check;
  std::string verdict;
  bool pass = false;
  double worst_residual = 0.0;
  Point witness;
  std::map<std::string, double> derived;  // fitted constants: rho, a, ...
  std::vector<SampleRow> rows;
  std::vector<std::string> notes;

  // Records row, tracking the worst headline residual and its witness point.
  void add_row(SampleRow row);
};

// Soliton-side certificate. Invariant: pass <=> worst_residual <= tol.
struct SolitonCertificate {
  std::string check;
  std::string verdict;
  bool pass = false;
  double worst_residual = 0.0;
  double tol = 1e-7;
  Point witness;
  std::map<std::string, double> derived;  // hdot / lambda / mu predictions
  std::vector<SampleRow> rows;
  std::vector<std::string> notes;

  void add_row(SampleRow row);
  // Sets pass from worst_residual vs tol and fills verdict pass/fail unless
  // a verdict was already forced (e.g. precondition_failed).
  void finalize();
};

}  // namespace dwarp

#endif  // DWARP_REPORT_HPP_
