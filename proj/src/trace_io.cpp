#include <istream>
#include <ostream>
#include <sstream>

#include "nclb/errors.hpp"
#include "nclb/oracle.hpp"

namespace nclb {

namespace {

double to_real(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("trace csv: bad number '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trace csv: bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TraceCsvWriter::TraceCsvWriter(std::ostream& out, std::uint64_t seed, bool include_x)
    : out_(&out), include_x_(include_x) {
  *out_ << "# seed=" << seed << '\n';
  *out_ << (include_x_ ? "t,grad_norm,f_value,x\n" : "t,grad_norm,f_value\n");
}

void TraceCsvWriter::write(std::size_t t, const QueryRecord& rec) {
  *out_ << t << ',' << format_real(rec.grad_norm) << ',' << format_real(rec.value);
  if (include_x_) {
    *out_ << ',';
    for (Eigen::Index j = 0; j < rec.point.size(); ++j) {
      if (j) *out_ << ';';
      *out_ << format_real(rec.point[j]);
    }
  }
  *out_ << '\n';
}

void write_trace_csv(std::ostream& out, const Trace& trace, bool include_x) {
  TraceCsvWriter w(out, trace.seed(), include_x);
  for (std::size_t i = 0; i < trace.size(); ++i) w.write(i + 1, trace[i]);
}

TraceCsv read_trace_csv(std::istream& in) {
  TraceCsv csv;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("seed=");
      if (pos != std::string::npos) {
        try {
          csv.seed = std::stoull(line.substr(pos + 5));
        } catch (const std::exception&) {
          throw ParseError("trace csv: bad seed comment");
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line == "t,grad_norm,f_value,x") {
        csv.has_x = true;
      } else if (line != "t,grad_norm,f_value") {
        throw ParseError("trace csv: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != (csv.has_x ? 4u : 3u)) throw ParseError("trace csv: wrong column count");
    TraceRow row;
    try {
      row.t = std::stoull(cells[0]);
    } catch (const std::exception&) {
      throw ParseError("trace csv: bad index '" + cells[0] + "'");
    }
    row.grad_norm = to_real(cells[1]);
    row.f_value = to_real(cells[2]);
    if (csv.has_x) {
      const auto parts = split(cells[3], ';');
      Vector x(static_cast<Eigen::Index>(parts.size()));
      for (std::size_t j = 0; j < parts.size(); ++j) x[j] = to_real(parts[j]);
      row.x = std::move(x);
    }
    csv.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("trace csv: missing header");
  return csv;
}

std::optional<std::size_t> replay_mismatch(const TraceCsv& csv, const Instance& inst) {
  if (!csv.has_x) throw PreconditionError("replay needs a trace written with x");
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const OracleReply r = evaluate(inst, *row.x, 1);
    if (r.gradient.norm() != row.grad_norm || r.value != row.f_value) return i + 1;
  }
  return std::nullopt;
}

}  // namespace nclb
