#include "uqdesk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "uqdesk/error.hpp"

namespace uqdesk::io {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::IoError, "cannot format number");
  return {buf, end};
}

double parse_double(std::string_view s) {
  // from_chars rejects a leading '+'; accept it for hand-written files.
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

void check_field(const std::string& s, const char* what) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::IoError,
                std::string(what) + " '" + s + "' contains a CSV delimiter");
  }
}

// Reads lines, dropping a trailing '\r' and blank trailing lines. Returns
// (line number, text) pairs.
std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& is) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.emplace_back(no, std::move(line));
  }
  return lines;
}

double field_number(std::string_view s, std::size_t line_no) {
  try {
    return parse_double(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " +
                                           std::string(s),
                line_no);
  }
}

}  // namespace

void write_dataset_csv(std::ostream& os, const LabeledDataset& d) {
  os << "id";
  for (std::size_t j = 0; j < d.n_features; ++j) os << ",x" << j;
  os << ",y";
  if (d.groups) os << ",group";
  if (d.true_sigma) os << ",true_sigma";
  os << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    check_field(d.ids[i], "id");
    os << d.ids[i];
    for (double v : d.row(i)) os << ',' << format_double(v);
    os << ',' << format_double(d.targets[i]);
    if (d.groups) {
      check_field((*d.groups)[i], "group");
      os << ',' << (*d.groups)[i];
    }
    if (d.true_sigma) os << ',' << format_double((*d.true_sigma)[i]);
    os << '\n';
  }
}

LabeledDataset read_dataset_csv(std::istream& is) {
  const auto lines = read_lines(is);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "missing header", 1);
  const auto header = split(lines[0].second);
  if (header.size() < 3 || header[0] != "id") {
    throw Error(ErrorCode::ParseError, "dataset header must start with 'id,x0,...'",
                lines[0].first);
  }
  LabeledDataset d;
  std::size_t col = 1;
  while (col < header.size() && header[col] == "x" + std::to_string(col - 1)) ++col;
  d.n_features = col - 1;
  if (d.n_features == 0 || col >= header.size() || header[col] != "y") {
    throw Error(ErrorCode::ParseError, "dataset header needs x0..x{d-1},y",
                lines[0].first);
  }
  ++col;
  std::ptrdiff_t group_col = -1, sigma_col = -1;
  if (col < header.size() && header[col] == "group") group_col = static_cast<std::ptrdiff_t>(col++);
  if (col < header.size() && header[col] == "true_sigma") sigma_col = static_cast<std::ptrdiff_t>(col++);
  if (col != header.size()) {
    throw Error(ErrorCode::ParseError,
                "unexpected column '" + std::string(header[col]) + "'", lines[0].first);
  }
  if (group_col >= 0) d.groups.emplace();
  if (sigma_col >= 0) d.true_sigma.emplace();

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, text] = lines[li];
    const auto f = split(text);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(no) + ": expected " +
                      std::to_string(header.size()) + " fields",
                  no);
    }
    d.ids.emplace_back(f[0]);
    for (std::size_t j = 0; j < d.n_features; ++j) {
      d.features.push_back(field_number(f[1 + j], no));
    }
    d.targets.push_back(field_number(f[1 + d.n_features], no));
    if (group_col >= 0) d.groups->emplace_back(f[static_cast<std::size_t>(group_col)]);
    if (sigma_col >= 0) {
      d.true_sigma->push_back(field_number(f[static_cast<std::size_t>(sigma_col)], no));
    }
  }
  if (!d.empty()) validate_dataset(d);
  return d;
}

void write_predictions_csv(std::ostream& os, const PredictionSet& p) {
  os << "id,y_true,y_pred,sigma" << (p.groups ? ",group" : "") << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    check_field(p.ids[i], "id");
    os << p.ids[i] << ',' << format_double(p.y_true[i]) << ','
       << format_double(p.mu[i]) << ',' << format_double(p.sigma[i]);
    if (p.groups) {
      check_field((*p.groups)[i], "group");
      os << ',' << (*p.groups)[i];
    }
    os << '\n';
  }
}

PredictionSet read_predictions_csv(std::istream& is) {
  const auto lines = read_lines(is);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "missing header", 1);
  const auto& header = lines[0].second;
  bool has_group = false;
  if (header == "id,y_true,y_pred,sigma,group") {
    has_group = true;
  } else if (header != "id,y_true,y_pred,sigma") {
    throw Error(ErrorCode::ParseError,
                "prediction header must be id,y_true,y_pred,sigma[,group]",
                lines[0].first);
  }
  PredictionSet p;
  if (has_group) p.groups.emplace();
  const std::size_t width = has_group ? 5 : 4;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [no, text] = lines[li];
    const auto f = split(text);
    if (f.size() != width) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(no) + ": expected " +
                      std::to_string(width) + " fields",
                  no);
    }
    p.ids.emplace_back(f[0]);
    p.y_true.push_back(field_number(f[1], no));
    p.mu.push_back(field_number(f[2], no));
    p.sigma.push_back(field_number(f[3], no));
    if (has_group) p.groups->emplace_back(f[4]);
  }
  validate_prediction_set(p);
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::istringstream ss(read_file(path));
  return read_dataset_csv(ss);
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  std::istringstream ss(read_file(path));
  return read_predictions_csv(ss);
}

}  // namespace uqdesk::io
