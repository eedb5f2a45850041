#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "hacdyn/experiments.hpp"

namespace hacdyn::csv {

// Shortest round-trip formatting, '.' decimal separator.
std::string format_double(double v);

inline constexpr const char* kEfficiencyHeader =
    "dgp,criterion,rho,T,method,bias,variance,mse,re_est,lag_median,lag_mean,reps";
inline constexpr const char* kSizeHeader = "dgp,criterion,rho,T,method,rejection,mc_se";
inline constexpr const char* kPowerHeader = "dgp,criterion,rho,T,method,beta_true,rejection";
inline constexpr const char* kSurfaceHeader = "rho,T,method,size_distortion";
inline constexpr const char* kWeakExoHeader =
    "dgp,criterion,T,beta_true,method,bias,variance,mse,re_est,lag_median,lag_mean,rejection,mc_se,reps";
inline constexpr const char* kForecastHeader = "T,rho,mspe_ols,mspe_dynreg,re_pred,analytic_re_pred,reps";

std::string efficiency_row(const ExperimentSummary& s);
std::string size_row(const ExperimentSummary& s);
std::string power_row(const ExperimentSummary& s);
std::string surface_row(const SurfacePoint& p);
std::string weak_exo_row(const ExperimentSummary& s);
std::string forecast_row(const ForecastSummary& f);

// Cell identifiers as they appear in the key columns of each file.
std::string grid_key(const CellKey& k);        // dgp,criterion,rho,T
std::string power_key(const CellKey& k);       // dgp,criterion,rho,T,beta_true
std::string surface_key(const CellKey& k);     // rho,T
std::string weak_exo_key(const CellKey& k);    // T,beta_true
std::string forecast_key(int T, double rho);   // T,rho

/// Reads a numeric table whose header names a `y` column and one or more
/// regressor columns (every other column except `t` and `u`, in file order). Blank lines are
/// skipped; malformed cells raise ParseError naming the line.
Sample read_data_csv(std::istream& in);
Sample read_data_csv(const std::filesystem::path& path);

/// Result file that is appended to cell by cell. With `resume`, rows of
/// complete cells already on disk are kept (a trailing partial line is
/// dropped) and their keys can be queried; otherwise the file is truncated.
class ResultFile {
 public:
  ResultFile(const std::filesystem::path& path, std::string header, std::vector<int> key_columns, bool resume);

  bool has(const std::string& key) const { return keys_.count(key) > 0; }
  void append(const std::vector<std::string>& rows);

 private:
  std::filesystem::path path_;
  std::vector<int> key_columns_;
  std::set<std::string> keys_;
  std::ofstream out_;
};

}  // namespace hacdyn::csv
