#include "hacdyn/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hacdyn/error.hpp"

namespace hacdyn::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back(',');
    out += p;
  }
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string ival(long long v) { return std::to_string(v); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest representation that parses back to the same double.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string efficiency_row(const ExperimentSummary& s) {
  return join({to_string(s.dgp), to_string(s.criterion), format_double(s.rho), ival(s.T), s.method,
               format_double(s.bias), format_double(s.variance), format_double(s.mse), format_double(s.re_est),
               format_double(s.lag_median), format_double(s.lag_mean), ival(s.reps_used)});
}

std::string size_row(const ExperimentSummary& s) {
  return join({to_string(s.dgp), to_string(s.criterion), format_double(s.rho), ival(s.T), s.method,
               format_double(s.rejection), format_double(s.mc_se)});
}

std::string power_row(const ExperimentSummary& s) {
  return join({to_string(s.dgp), to_string(s.criterion), format_double(s.rho), ival(s.T), s.method,
               format_double(s.beta_true), format_double(s.rejection)});
}

std::string surface_row(const SurfacePoint& p) {
  return join({format_double(p.rho), ival(p.T), p.method, format_double(p.size_distortion)});
}

std::string weak_exo_row(const ExperimentSummary& s) {
  return join({to_string(s.dgp), to_string(s.criterion), ival(s.T), format_double(s.beta_true), s.method,
               format_double(s.bias), format_double(s.variance), format_double(s.mse), format_double(s.re_est),
               format_double(s.lag_median), format_double(s.lag_mean), format_double(s.rejection),
               format_double(s.mc_se), ival(s.reps_used)});
}

std::string forecast_row(const ForecastSummary& f) {
  return join({ival(f.T), format_double(f.rho), format_double(f.result.mspe_subopt),
               format_double(f.result.mspe_opt), format_double(f.result.re_pred_hat), format_double(f.analytic),
               ival(f.reps)});
}

std::string grid_key(const CellKey& k) {
  return join({to_string(k.dgp), to_string(k.criterion), format_double(k.rho), ival(k.T)});
}

std::string power_key(const CellKey& k) { return grid_key(k) + "," + format_double(k.beta_true); }

std::string surface_key(const CellKey& k) { return join({format_double(k.rho), ival(k.T)}); }

std::string weak_exo_key(const CellKey& k) { return join({ival(k.T), format_double(k.beta_true)}); }

std::string forecast_key(int T, double rho) { return join({ival(T), format_double(rho)}); }

Sample read_data_csv(std::istream& in) {
  std::string line;
  long long line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::ParseError, "line " + ival(line_no) + ": missing header");

  int y_col = -1;
  std::vector<int> x_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = lower(header[i]);
    if (name == "y" && y_col < 0) {
      y_col = static_cast<int>(i);
    } else if (name != "t" && name != "u") {
      x_cols.push_back(static_cast<int>(i));
    }
  }
  if (y_col < 0) throw Error(ErrorCode::ParseError, "line " + ival(line_no) + ": header has no 'y' column");
  if (x_cols.empty()) throw Error(ErrorCode::ParseError, "line " + ival(line_no) + ": header has no regressor column");

  std::vector<double> ys;
  std::vector<std::vector<double>> xs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, "line " + ival(line_no) + ": expected " + ival(static_cast<long long>(header.size())) +
                                             " fields, found " + ival(static_cast<long long>(cells.size())));
    }
    auto parse = [&](int col) {
      const std::string& c = cells[static_cast<std::size_t>(col)];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::ParseError,
                    "line " + ival(line_no) + ": column '" + header[static_cast<std::size_t>(col)] + "' value '" + c + "' is not a finite number");
      }
      return v;
    };
    ys.push_back(parse(y_col));
    std::vector<double> row;
    for (int c : x_cols) row.push_back(parse(c));
    xs.push_back(std::move(row));
  }

  const auto n = static_cast<Eigen::Index>(ys.size());
  Vector y = Eigen::Map<const Vector>(ys.data(), n);
  Matrix x(n, static_cast<Eigen::Index>(x_cols.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return make_sample(std::move(y), std::move(x));
}

Sample read_data_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return read_data_csv(in);
}

ResultFile::ResultFile(const std::filesystem::path& path, std::string header, std::vector<int> key_columns,
                       bool resume)
    : path_(path), key_columns_(std::move(key_columns)) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());

  std::vector<std::string> kept;
  if (resume && std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const bool partial = !content.empty() && content.back() != '\n';
    std::vector<std::string> lines;
    std::istringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    if (partial && !lines.empty()) lines.pop_back();

    if (!lines.empty() && lines.front() == header) {
      auto key_of = [&](const std::string& l) {
        const auto cells = split(l);
        std::string k;
        for (int c : key_columns_) {
          if (!k.empty()) k.push_back(',');
          if (static_cast<std::size_t>(c) < cells.size()) k += cells[static_cast<std::size_t>(c)];
        }
        return k;
      };
      // A torn write belongs to the last cell; drop that cell entirely.
      if (partial && lines.size() > 1) {
        const std::string last = key_of(lines.back());
        while (lines.size() > 1 && key_of(lines.back()) == last) lines.pop_back();
      }
      for (std::size_t i = 1; i < lines.size(); ++i) {
        keys_.insert(key_of(lines[i]));
        kept.push_back(lines[i]);
      }
    }
  }

  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out_ << header << '\n';
  for (const auto& l : kept) out_ << l << '\n';
  out_.flush();
}

void ResultFile::append(const std::vector<std::string>& rows) {
  std::string block;
  for (const auto& r : rows) {
    block += r;
    block.push_back('\n');
  }
  out_ << block;
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "write to '" + path_.string() + "' failed");
}

}  // namespace hacdyn::csv
