#include "grood/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace grood::io {

namespace {

bool is_skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size()) {
    throw ParseError(line, "not a number: '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, "non-finite value: '" + std::string(tok) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view tok, std::size_t line, bool allow_zero) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || (v == 0 && !allow_zero)) {
    throw ParseError(line, "expected a positive integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::size_t parse_dim(std::string_view tok, std::size_t line) {
  return parse_count(tok, line, false);
}

// Reads significant lines, tracking 1-based line numbers.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!is_skippable(line)) return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }

private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::pair<std::size_t, std::size_t> read_header(LineReader& reader, const char* what) {
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(reader.number() + 1, std::string("missing ") + what + " header");
  }
  const auto toks = tokenize(line);
  if (toks.size() != 2) {
    throw ParseError(reader.number(), std::string("header must hold ") + what);
  }
  return {parse_dim(toks[0], reader.number()), parse_dim(toks[1], reader.number())};
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  return out;
}

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_double(values[i]);
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

Matrix parse_matrix(std::istream& in) {
  LineReader reader(in);
  const auto [rows, cols] = read_header(reader, "\"rows cols\"");
  Matrix m(rows, cols);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!reader.next(line)) {
      throw Error(ErrorKind::DimensionMismatch,
                  "line " + std::to_string(reader.number() + 1) + ": expected " +
                      std::to_string(rows) + " rows, found " + std::to_string(i));
    }
    const auto toks = tokenize(line);
    if (toks.size() != cols) {
      throw ParseError(reader.number(), "expected " + std::to_string(cols) +
                                            " values, found " + std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_double(toks[j], reader.number());
  }
  if (reader.next(line)) {
    throw Error(ErrorKind::DimensionMismatch,
                "line " + std::to_string(reader.number()) + ": more than " +
                    std::to_string(rows) + " rows");
  }
  return m;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  std::vector<double> row(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    write_row(out, row);
  }
}

Matrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_matrix(in);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

UpdateStream parse_update_stream(std::istream& in) {
  LineReader reader(in);
  UpdateStream s;
  std::tie(s.n, s.p) = read_header(reader, "\"n p\"");
  std::string line;
  while (reader.next(line)) {
    const auto toks = tokenize(line);
    if (toks.size() != s.n + s.p) {
      throw ParseError(reader.number(), "expected " + std::to_string(s.n + s.p) +
                                            " values, found " + std::to_string(toks.size()));
    }
    RankOneUpdate up{Vector(s.n), Vector(s.p)};
    for (std::size_t i = 0; i < s.n; ++i) up.a[i] = parse_double(toks[i], reader.number());
    for (std::size_t j = 0; j < s.p; ++j) up.b[j] = parse_double(toks[s.n + j], reader.number());
    s.updates.push_back(std::move(up));
  }
  return s;
}

void write_update_stream(std::ostream& out, std::size_t n, std::size_t p,
                         std::span<const RankOneUpdate> updates) {
  out << n << ' ' << p << '\n';
  std::vector<double> row(n + p);
  for (const auto& up : updates) {
    require_dims(up.a.size() == n && up.b.size() == p,
                 "write_update_stream: record does not match header");
    std::copy(up.a.begin(), up.a.end(), row.begin());
    std::copy(up.b.begin(), up.b.end(), row.begin() + static_cast<std::ptrdiff_t>(n));
    write_row(out, row);
  }
}

UpdateStream read_update_stream(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_update_stream(in);
}

void write_update_stream(const std::filesystem::path& path, std::size_t n,
                         std::size_t p, std::span<const RankOneUpdate> updates) {
  auto out = open_out(path);
  write_update_stream(out, n, p, updates);
}

void write_report_csv(std::ostream& out, std::span<const StepReport> reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << r.step_index << ',' << to_string(r.kind) << ',' << format_double(r.distance)
        << ',' << format_double(r.ortho_drift) << ',';
    if (r.recon_residual) out << format_double(*r.recon_residual);
    out << ',' << r.wall_time_ns << '\n';
  }
}

std::vector<StepReport> parse_report_csv(std::istream& in) {
  std::string line;
  std::size_t number = 1;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw ParseError(number, "missing report header");
  }
  std::vector<StepReport> out;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 6) throw ParseError(number, "expected 6 fields");

    StepReport r{};
    r.step_index = parse_count(fields[0], number, true);
    bool known = false;
    for (auto k : {UpdateKind::Generic, UpdateKind::InRangeRegular, UpdateKind::Deflating,
                   UpdateKind::NoOp}) {
      if (fields[1] == to_string(k)) {
        r.kind = k;
        known = true;
      }
    }
    if (!known) throw ParseError(number, "unknown kind '" + fields[1] + "'");
    r.distance = parse_double(fields[2], number);
    r.ortho_drift = parse_double(fields[3], number);
    if (!fields[4].empty()) r.recon_residual = parse_double(fields[4], number);
    const auto& t = fields[5];
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), r.wall_time_ns);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ParseError(number, "bad wall_time_ns");
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace grood::io
