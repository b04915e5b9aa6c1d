#pragma once

// Derivative oracle, query log and the bookkeeping built on it.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nclb/instances.hpp"

namespace nclb {

struct OracleReply {
  double value = 0.0;
  Vector gradient;
  std::optional<Matrix> hessian;  // present iff order >= 2
  int order = 1;
};

/// Stateless evaluation; order must be 1 or 2.
OracleReply evaluate(const Instance& inst, VectorRef x, int order);

/// One logged query. Hessians are not retained in the log.
struct QueryRecord {
  Vector point;
  double value = 0.0;
  Vector gradient;
  double grad_norm = 0.0;
  int order = 1;
};

class Trace {
 public:
  static constexpr std::size_t kDefaultCapacity = 1000000;

  explicit Trace(std::uint64_t seed = 0, std::size_t capacity = kDefaultCapacity)
      : seed_(seed), capacity_(capacity) {}

  void append(VectorRef x, const OracleReply& reply);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const QueryRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<QueryRecord>& records() const { return records_; }
  std::vector<double> grad_norms() const;

  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

 private:
  std::uint64_t seed_;
  std::size_t capacity_;
  std::vector<QueryRecord> records_;
};

/// Evaluates an instance and appends every query to a trace.
class Oracle {
 public:
  Oracle(const Instance& inst, Trace& trace) : inst_(&inst), trace_(&trace) {}

  OracleReply query(VectorRef x, int order);

  const Instance& instance() const { return *inst_; }
  Trace& trace() { return *trace_; }

 private:
  const Instance* inst_;
  Trace* trace_;
};

/// 1-based index of the first query with grad_norm <= eps.
std::optional<std::size_t> t_eps(const std::vector<double>& grad_norms, double eps);
std::optional<std::size_t> t_eps(const Trace& trace, double eps);

/// Coordinates on which some derivative of order 1..p can be non-zero.
/// Exact for the plain instance via the dead-zone rule; other variants are
/// refused with UnsupportedVariant.
std::vector<int> derivative_support(const Instance& inst, VectorRef x, int p);

struct ZeroRespectingViolation {
  std::size_t t;   // 1-based query index
  int coordinate;  // 0-based coordinate outside the discovered support
};

/// nullopt when every iterate lies in the union of the derivative supports
/// seen at earlier iterates (so the first iterate must be the origin).
std::optional<ZeroRespectingViolation> check_zero_respecting(const Trace& trace,
                                                            const Instance& inst, int p);
std::optional<ZeroRespectingViolation> check_zero_respecting(const std::vector<Vector>& points,
                                                            const Instance& inst, int p);

// ---------------------------------------------------------------------------
// Trace CSV: "# seed=<n>" then header t,grad_norm,f_value[,x]; x is written
// as ';'-separated coordinates. Reals use 17 significant digits.

struct TraceRow {
  std::size_t t = 0;
  double grad_norm = 0.0;
  double f_value = 0.0;
  std::optional<Vector> x;
};

struct TraceCsv {
  std::uint64_t seed = 0;
  bool has_x = false;
  std::vector<TraceRow> rows;
};

void write_trace_csv(std::ostream& out, const Trace& trace, bool include_x);
TraceCsv read_trace_csv(std::istream& in);

/// Streams rows to a CSV as they are produced.
class TraceCsvWriter {
 public:
  TraceCsvWriter(std::ostream& out, std::uint64_t seed, bool include_x);
  void write(std::size_t t, const QueryRecord& rec);

 private:
  std::ostream* out_;
  bool include_x_;
};

/// Re-evaluates each stored point and compares gradient norms and values
/// bit-for-bit; returns the first mismatching 1-based row, if any.
std::optional<std::size_t> replay_mismatch(const TraceCsv& csv, const Instance& inst);

}  // namespace nclb
