#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "widomlab/acceptance.hpp"
#include "widomlab/bandset.hpp"
#include "widomlab/config.hpp"
#include "widomlab/construct_pointmass.hpp"
#include "widomlab/construct_sc.hpp"

namespace widomlab {

using nlohmann::json;

/// Parses JSON text; syntax errors become ValidationError "source:line:col: ...".
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"bands": [[lo, hi], ...], "divisor": [...], "anchor": b0}; divisor and
/// anchor optional.
struct BandInput {
  BandSet E;
  std::optional<Divisor> divisor;
  std::optional<double> anchor;
};
BandInput parse_band_input(const json& j);
json bandset_json(const BandSet& E);

/// Common header of every emitted document: schema id, seed and effective config.
json envelope(const std::string& schema, const RunConfig& cfg);

json pointmass_trace_json(const ConstructionTrace& tr);
std::string pointmass_trace_csv(const ConstructionTrace& tr);

json sc_trace_json(const ScTrace& tr, const MassReport& rep);
std::string sc_segments_csv(const ScTrace& tr);

json acceptance_json(const std::vector<CriterionResult>& results);

/// Shortest round-trip decimal form, so CSV output is reproducible.
std::string format_double(double v);

}  // namespace widomlab
