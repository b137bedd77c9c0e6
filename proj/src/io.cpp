#include "nslab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field snapshots are little-endian; big-endian hosts need byte swaps");

namespace nslab {

namespace {

struct SnapshotHeader {
  double L;
  std::uint32_t N;
  std::uint8_t components;
};

void write_header(std::ofstream& out, const GridSpec& g, std::uint8_t components) {
  double L = g.L;
  std::uint32_t N = static_cast<std::uint32_t>(g.N);
  out.write(reinterpret_cast<const char*>(&L), sizeof(L));
  out.write(reinterpret_cast<const char*>(&N), sizeof(N));
  out.write(reinterpret_cast<const char*>(&components), sizeof(components));
}

SnapshotHeader read_header(std::ifstream& in, const std::string& path) {
  SnapshotHeader h{};
  in.read(reinterpret_cast<char*>(&h.L), sizeof(h.L));
  in.read(reinterpret_cast<char*>(&h.N), sizeof(h.N));
  in.read(reinterpret_cast<char*>(&h.components), sizeof(h.components));
  if (!in) throw std::runtime_error("truncated field snapshot: " + path);
  if (h.L <= 0 || h.N == 0) throw std::runtime_error("corrupt field snapshot header: " + path);
  return h;
}

void write_block(std::ofstream& out, const RArray& a) {
  out.write(reinterpret_cast<const char*>(a.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(a.size())));
}

void read_block(std::ifstream& in, RArray& a, const std::string& path) {
  in.read(reinterpret_cast<char*>(a.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(a.size())));
  if (!in) throw std::runtime_error("truncated field snapshot: " + path);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f) {
  auto out = open_out(path, std::ios::binary);
  write_header(out, f.grid, 1);
  write_block(out, f.v);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_field(const std::string& path, const VectorField& u) {
  auto out = open_out(path, std::ios::binary);
  write_header(out, u.grid, 3);
  for (int c = 0; c < 3; ++c) write_block(out, u.v[c]);
  if (!out) throw std::runtime_error("write failed: " + path);
}

ScalarField read_scalar_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  auto h = read_header(in, path);
  if (h.components != 1)
    throw std::runtime_error("expected a 1-component snapshot: " + path);
  ScalarField f(GridSpec{h.L, static_cast<int>(h.N)});
  read_block(in, f.v, path);
  return f;
}

VectorField read_vector_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  auto h = read_header(in, path);
  if (h.components != 3)
    throw std::runtime_error("expected a 3-component snapshot: " + path);
  VectorField u(GridSpec{h.L, static_cast<int>(h.N)});
  for (int c = 0; c < 3; ++c) read_block(in, u.v[c], path);
  return u;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("csv header and column counts differ");
  auto out = open_out(path, std::ios::out);
  std::size_t rows = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
    rows = std::max(rows, columns[c]->size());
  }
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      if (r < columns[c]->size()) out << format_g17((*columns[c])[r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_flow_trace_csv(const std::string& path, const FlowTrace& tr) {
  write_csv(path,
            {"t", "l2", "h1semi", "linf", "l4", "l6", "dissipation_cum", "energy_defect"},
            {&tr.t, &tr.l2, &tr.h1semi, &tr.linf, &tr.l4, &tr.l6,
             &tr.dissipation_cum, &tr.energy_defect});
}

void write_json(const std::string& path, const OrderedJson& j) {
  auto out = open_out(path, std::ios::out);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

OrderedJson picard_run_json(const PicardRun& run) {
  OrderedJson j;
  j["lambda_observed"] = run.lambda_observed;
  j["T_formula"] = run.t_formula;
  j["iterations"] = run.iterations;
  j["diffs"] = run.diffs;
  j["diffs_l2"] = run.diffs_l2;
  j["residual_l2"] = run.residual_l2;
  j["tol"] = run.tol;
  return j;
}

OrderedJson interval_set_json(const IntervalSet& s) {
  OrderedJson j;
  j["horizon"] = s.horizon;
  auto arr = OrderedJson::array();
  for (const auto& [a, b] : s.intervals) arr.push_back(OrderedJson::array({a, b}));
  j["intervals"] = arr;
  return j;
}

OrderedJson box_dim_json(const BoxDimEstimate& e) {
  OrderedJson j;
  j["dimension"] = e.dimension;
  j["stderr"] = e.std_error;
  return j;
}

OrderedJson measured_constants_json(const MeasuredConstants& mc) {
  OrderedJson j;
  j["c_prime"] = mc.c_prime;
  j["c_dprime"] = mc.c_dprime;
  j["c_a"] = mc.c_a;
  j["c_b"] = mc.c_b;
  j["c_grad_heat"] = mc.c_grad_heat;
  j["c_oseen_l2"] = mc.c_oseen_l2;
  j["c_moll"] = mc.c_moll;
  j["c_heat_linf"] = mc.c_heat_linf;
  OrderedJson prov;
  prov["grid"] = {{"L", mc.grid.L}, {"N", mc.grid.N}};
  prov["mesh"] = {{"T", mc.mesh_t}, {"M", mc.mesh_m}};
  prov["seed"] = mc.seed;
  prov["batch"] = mc.batch;
  j["provenance"] = prov;
  return j;
}

}  // namespace nslab
