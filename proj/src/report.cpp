#include <atomic>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nclb/errors.hpp"
#include "nclb/experiments.hpp"

namespace nclb {

bool BoundsReport::passed() const {
  for (const auto& v : verdicts) {
    if (!v.pass) return false;
  }
  return true;
}

void BoundsReport::verdict(std::string name, bool pass, std::string detail) {
  verdicts.push_back({std::move(name), pass, std::move(detail)});
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

void write_report_csv(std::ostream& out, const BoundsReport& r) {
  out << "# experiment=" << r.experiment << '\n';
  out << "# params=";
  for (std::size_t i = 0; i < r.params.size(); ++i) {
    const auto& [k, v] = r.params[i];
    if (k.find_first_of(";=\n") != std::string::npos || v.find_first_of(";\n") != std::string::npos) {
      throw PreconditionError("report param '" + k + "' cannot be written unambiguously");
    }
    if (i) out << ';';
    out << r.params[i].first << '=' << r.params[i].second;
  }
  out << '\n';
  out << "# relaxed=" << (r.relaxed ? "true" : "false") << '\n';
  out << "# seed=" << r.seed << '\n';
  for (const auto& v : r.verdicts) {
    out << "# verdict " << v.name << '=' << (v.pass ? "pass" : "fail");
    if (!v.detail.empty()) out << ' ' << v.detail;
    out << '\n';
  }
  for (const auto& n : r.notes) out << "# note " << n << '\n';
  write_row(out, r.columns);
  for (const auto& row : r.rows) write_row(out, row);
}

void write_reports_csv(std::ostream& out, const std::vector<BoundsReport>& reports) {
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out << '\n';
    write_report_csv(out, reports[i]);
  }
}

std::vector<BoundsReport> read_reports_csv(std::istream& in) {
  std::vector<BoundsReport> out;
  std::string line;
  BoundsReport* cur = nullptr;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      cur = nullptr;
      continue;
    }
    if (starts_with(line, "# experiment=")) {
      out.emplace_back();
      cur = &out.back();
      cur->experiment = line.substr(13);
      have_columns = false;
      continue;
    }
    if (!cur) throw ParseError("report csv: content before '# experiment='");
    if (starts_with(line, "# params=")) {
      const std::string body = line.substr(9);
      if (!body.empty()) {
        for (const auto& kv : split(body, ';')) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw ParseError("report csv: bad param '" + kv + "'");
          cur->params.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
      }
    } else if (starts_with(line, "# relaxed=")) {
      const std::string v = line.substr(10);
      if (v != "true" && v != "false") throw ParseError("report csv: bad relaxed flag");
      cur->relaxed = v == "true";
    } else if (starts_with(line, "# seed=")) {
      try {
        cur->seed = std::stoull(line.substr(7));
      } catch (const std::exception&) {
        throw ParseError("report csv: bad seed");
      }
    } else if (starts_with(line, "# verdict ")) {
      const std::string body = line.substr(10);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ParseError("report csv: bad verdict line");
      Verdict v;
      v.name = body.substr(0, eq);
      std::string rest = body.substr(eq + 1);
      const auto sp = rest.find(' ');
      const std::string flag = rest.substr(0, sp);
      if (flag != "pass" && flag != "fail") throw ParseError("report csv: bad verdict flag");
      v.pass = flag == "pass";
      if (sp != std::string::npos) v.detail = rest.substr(sp + 1);
      cur->verdicts.push_back(std::move(v));
    } else if (starts_with(line, "# note ")) {
      cur->notes.push_back(line.substr(7));
    } else if (line[0] == '#') {
      throw ParseError("report csv: unknown comment '" + line + "'");
    } else if (!have_columns) {
      cur->columns = split(line, ',');
      have_columns = true;
    } else {
      auto cells = split(line, ',');
      if (cells.size() != cur->columns.size()) throw ParseError("report csv: ragged row");
      cur->rows.push_back(std::move(cells));
    }
  }
  return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto workers = static_cast<std::size_t>(jobs) < n ? static_cast<std::size_t>(jobs) : n;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nclb
