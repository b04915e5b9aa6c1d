#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nclb/errors.hpp"
#include "nclb/instances.hpp"

namespace nclb {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_real(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("instance header: bad number for '" + key + "': " + s);
  }
  if (used != s.size()) throw ParseError("instance header: trailing text in '" + key + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  std::uint64_t v;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ParseError("instance header: bad integer for '" + key + "': " + s);
  }
  if (used != s.size()) throw ParseError("instance header: trailing text in '" + key + "'");
  return v;
}

void write_matrix(std::ostream& out, const Matrix& U) {
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(U(i, j));
    }
    out << '\n';
  }
}

}  // namespace

void write_instance(std::ostream& out, const Instance& inst) {
  struct Header {
    int p, T, d;
    double sigma, multiplier, R, D;
    std::uint64_t seed;
  } h{};
  const Matrix* U = nullptr;
  if (const auto* pl = inst.plain()) {
    h = {pl->p, pl->T, pl->T, pl->sigma, pl->multiplier, 0.0, 0.0, 0};
  } else if (const auto* r = inst.rotated()) {
    h = {r->p, r->T(), r->dim(), r->sigma, r->multiplier, r->radius, 0.0, r->seed};
    U = &r->U;
  } else {
    const auto& di = *inst.distance();
    const auto& b = di.body;
    h = {b.p, b.T(), b.dim(), b.sigma, b.multiplier, b.radius, di.D, b.seed};
    U = &b.U;
  }
  out << "variant=" << inst.variant_name() << " p=" << h.p << " T=" << h.T << " d=" << h.d
      << " sigma=" << format_real(h.sigma) << " multiplier=" << format_real(h.multiplier)
      << " R=" << format_real(h.R) << " D=" << format_real(h.D) << " seed=" << h.seed << '\n';
  if (U) write_matrix(out, *U);
}

Instance read_instance(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("instance file: missing header");
  std::map<std::string, std::string> kv;
  std::istringstream tokens(line);
  std::string tok;
  while (tokens >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("instance header: token without '=': " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"variant", "p", "T", "d", "sigma", "multiplier", "R", "D", "seed"}) {
    if (!kv.count(key)) throw ParseError(std::string("instance header: missing '") + key + "'");
  }
  if (kv.size() != 9) throw ParseError("instance header: unknown keys present");

  const std::string variant = kv["variant"];
  const int p = static_cast<int>(parse_u64(kv["p"], "p"));
  const int T = static_cast<int>(parse_u64(kv["T"], "T"));
  const int d = static_cast<int>(parse_u64(kv["d"], "d"));
  const double sigma = parse_real(kv["sigma"], "sigma");
  const double multiplier = parse_real(kv["multiplier"], "multiplier");
  const double R = parse_real(kv["R"], "R");
  const double D = parse_real(kv["D"], "D");
  const std::uint64_t seed = parse_u64(kv["seed"], "seed");

  if (variant == "plain") {
    if (d != T) throw ParseError("plain instance: d must equal T");
    return PlainInstance(T, sigma, multiplier, p);
  }
  if (variant != "rotated" && variant != "distance") {
    throw ParseError("instance header: unknown variant '" + variant + "'");
  }
  if (T < 1 || d < T) throw ParseError("instance header: need d >= T >= 1");
  Matrix U(d, T);
  for (int i = 0; i < d; ++i) {
    if (!std::getline(in, line)) throw ParseError("instance file: truncated U");
    std::istringstream row(line);
    for (int j = 0; j < T; ++j) {
      std::string cell;
      if (!(row >> cell)) throw ParseError("instance file: short U row " + std::to_string(i));
      U(i, j) = parse_real(cell, "U");
    }
    std::string extra;
    if (row >> extra) throw ParseError("instance file: long U row " + std::to_string(i));
  }
  RotatedInstance body(std::move(U), R, sigma, multiplier, p, seed);
  if (variant == "rotated") return body;
  return DistanceInstance(std::move(body), D);
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  write_instance(out, inst);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_instance(in);
}

}  // namespace nclb
