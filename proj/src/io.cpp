#include "rdns/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace rdns {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[5] = {'R', 'D', 'N', 'S', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("truncated snapshot '" + path + "'");
  return v;
}

void put_field(std::ofstream& out, const Field& f) {
  out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
}

Field get_field(std::ifstream& in, std::size_t n, const std::string& path) {
  Field f(n);
  if (!in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(n * sizeof(double))))
    throw std::runtime_error("truncated snapshot '" + path + "'");
  return f;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
  const std::size_t n = s.r.size();
  if (s.rho.size() != n || s.u.size() != n ||
      (s.formulation == Formulation::enlarged && s.psi.size() != n))
    throw std::invalid_argument("write_snapshot: field size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write snapshot '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put<double>(out, s.t);
  put<double>(out, s.r_max);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(s.formulation));
  put_field(out, s.r);
  put_field(out, s.rho);
  put_field(out, s.u);
  if (s.formulation == Formulation::enlarged) put_field(out, s.psi);
  if (!out) throw std::runtime_error("write failed for snapshot '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read snapshot '" + path + "'");
  char magic[5];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("bad snapshot magic in '" + path + "'");
  Snapshot s;
  const auto n = get<std::uint32_t>(in, path);
  s.t = get<double>(in, path);
  s.r_max = get<double>(in, path);
  const auto tag = get<std::uint8_t>(in, path);
  if (tag > 1) throw std::runtime_error("bad formulation tag in '" + path + "'");
  s.formulation = static_cast<Formulation>(tag);
  s.r = get_field(in, n, path);
  s.rho = get_field(in, n, path);
  s.u = get_field(in, n, path);
  if (s.formulation == Formulation::enlarged) s.psi = get_field(in, n, path);
  if (in.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("trailing bytes in snapshot '" + path + "'");
  return s;
}

std::vector<std::string> list_snapshots(const std::string& dir) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("snap_", 0) == 0 && e.path().extension() == ".bin")
      out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_trajectory_snapshots(const std::string& dir, const Trajectory& traj,
                                const RadialGrid& grid) {
  std::filesystem::create_directories(dir);
  const Field r(grid.nodes().begin(), grid.nodes().end());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    Snapshot s;
    s.formulation = traj.formulation;
    s.t = traj.states[k].t;
    s.r_max = grid.r_max();
    s.r = r;
    s.rho = traj.states[k].rho;
    s.u = traj.states[k].u;
    if (traj.formulation == Formulation::enlarged) s.psi = traj.psi.at(k);
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.bin", k);
    write_snapshot((std::filesystem::path(dir) / name).string(), s);
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  const auto cols = csv_columns(rows.empty() ? std::vector<LedgerEntry>{} : rows.front().ledger);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    const double fixed[] = {r.t,          r.mass,    r.momentum_radial, r.energy,
                            r.dissipation_cum, r.bd_entropy, r.v_inf, r.v_resid,
                            r.rho_min,    r.rho_max, r.lb_margin,       r.ub_tail};
    bool first = true;
    for (double v : fixed) {
      out << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out << ',' << r.clamps;
    for (const auto& e : r.ledger) out << ',' << format_double(e.value);
    out << '\n';
  }
}

}  // namespace rdns
