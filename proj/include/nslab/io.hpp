#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nslab/nse.hpp"
#include "nslab/structure.hpp"

namespace nslab {

// All JSON leaving the library preserves insertion order, so identical runs
// produce byte-identical artifacts.
using OrderedJson = nlohmann::ordered_json;

// Flat binary field snapshot: header {L: f64, N: u32, components: u8},
// then row-major little-endian f64 samples, one block per component.
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& u);
ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

// shortest distinguishing decimal of a double ("%.17g", '.' decimal point)
std::string format_g17(double v);

// CSV: comma separated, header row, LF line endings, values via format_g17.
// `columns` are parallel vectors; shorter columns pad with empty cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

// the trace ledger, columns t, l2, h1semi, linf, l4, l6, dissipation_cum,
// energy_defect
void write_flow_trace_csv(const std::string& path, const FlowTrace& tr);

void write_json(const std::string& path, const OrderedJson& j);

OrderedJson picard_run_json(const PicardRun& run);
OrderedJson interval_set_json(const IntervalSet& s);
OrderedJson box_dim_json(const BoxDimEstimate& e);
OrderedJson measured_constants_json(const MeasuredConstants& mc);

}  // namespace nslab
