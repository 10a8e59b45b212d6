#include "widomlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "widomlab/error.hpp"

namespace widomlab {

namespace {

const char* role_name(SegmentRole r) {
  switch (r) {
    case SegmentRole::outer_left: return "outer_left";
    case SegmentRole::outer_right: return "outer_right";
    case SegmentRole::flank_left: return "flank_left";
    case SegmentRole::flank_right: return "flank_right";
    case SegmentRole::tree: return "tree";
  }
  return "tree";
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ValidationError(what + " must be a number");
  return v.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                          msg + ")");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed for " + path);
}

BandInput parse_band_input(const json& j) {
  if (!j.is_object()) throw ValidationError("band input must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "bands" && it.key() != "divisor" && it.key() != "anchor") {
      throw ValidationError("unknown key '" + it.key() + "' in band input");
    }
  }
  if (!j.contains("bands") || !j["bands"].is_array()) throw ValidationError("band input needs a 'bands' array");
  std::vector<Interval> bands;
  for (std::size_t k = 0; k < j["bands"].size(); ++k) {
    const json& b = j["bands"][k];
    const std::string where = "bands[" + std::to_string(k) + "]";
    if (!b.is_array() || b.size() != 2) throw ValidationError(where + " must be [lo, hi]");
    bands.push_back(make_interval(number(b[0], where + "[0]"), number(b[1], where + "[1]")));
  }
  for (std::size_t k = 1; k < bands.size(); ++k) {
    if (!(bands[k - 1].hi < bands[k].lo)) throw ValidationError("bands must be ascending and disjoint");
  }
  BandInput in{make_bandset(bands), std::nullopt, std::nullopt};
  if (j.contains("divisor")) {
    if (!j["divisor"].is_array()) throw ValidationError("'divisor' must be an array");
    Divisor d;
    for (std::size_t k = 0; k < j["divisor"].size(); ++k) {
      d.points.push_back(number(j["divisor"][k], "divisor[" + std::to_string(k) + "]"));
    }
    validate_divisor(in.E, d);
    in.divisor = d;
  }
  if (j.contains("anchor")) in.anchor = number(j["anchor"], "anchor");
  return in;
}

json bandset_json(const BandSet& E) {
  json b = json::array();
  for (const auto& band : E.bands()) b.push_back({band.lo, band.hi});
  return b;
}

json envelope(const std::string& schema, const RunConfig& cfg) {
  return json{{"schema", schema}, {"version", 1}, {"seed", cfg.seed}, {"config", to_json(cfg)}};
}

json pointmass_trace_json(const ConstructionTrace& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps) {
    steps.push_back({{"n", s.n},
                     {"a", s.a},
                     {"b", s.b},
                     {"omega", s.omega},
                     {"ratio", s.ratio},
                     {"one_minus_ratio", s.s},
                     {"halvings", s.halvings},
                     {"green_at_0", s.green_at_0},
                     {"widom_partial", s.widom_partial},
                     {"series_partial", s.series_partial},
                     {"atom_estimate", s.atom_estimate}});
  }
  return json{{"initial_green_at_0", tr.initial_green_at_0},
              {"steps", steps},
              {"final_set", bandset_json(tr.final_set)},
              {"critical_points", tr.critical_points},
              {"widom_terms", tr.widom_terms}};
}

std::string pointmass_trace_csv(const ConstructionTrace& tr) {
  std::string out = "n,a,b,omega,ratio,one_minus_ratio,halvings,green_at_0,widom_partial,series_partial,atom_estimate\n";
  for (const auto& s : tr.steps) {
    out += std::to_string(s.n) + "," + format_double(s.a) + "," + format_double(s.b) + "," + format_double(s.omega) +
           "," + format_double(s.ratio) + "," + format_double(s.s) + "," + std::to_string(s.halvings) + "," +
           format_double(s.green_at_0) + "," + format_double(s.widom_partial) + "," + format_double(s.series_partial) +
           "," + format_double(s.atom_estimate) + "\n";
  }
  return out;
}

json sc_trace_json(const ScTrace& tr, const MassReport& rep) {
  json segs = json::array();
  for (const auto& s : tr.segments) {
    json children = json::array();
    for (int c : s.children) children.push_back(tr.segments[c].label);
    json seg{{"label", s.label},
             {"lo", s.seg.lo},
             {"hi", s.seg.hi},
             {"role", role_name(s.role)},
             {"generation", s.generation},
             {"step", s.step},
             {"parent", s.parent >= 0 ? json(tr.segments[s.parent].label) : json(nullptr)},
             {"children", children}};
    seg["neighborhood"] = s.neighborhood ? json{s.neighborhood->lo, s.neighborhood->hi} : json(nullptr);
    segs.push_back(seg);
  }
  json masses = json::array();
  for (const auto& m : tr.masses) {
    masses.push_back({{"segment", m.segment}, {"generation", m.generation}, {"measure", m.measure}, {"mass", m.mass}});
  }
  json r_audit = json::array();
  for (const auto& r : tr.r_audit) {
    r_audit.push_back({{"segment", r.segment}, {"z", r.z}, {"eps", r.eps}, {"r", r.r}, {"ok", r.ok}});
  }
  json green = json::array();
  for (const auto& g : tr.green_audit) {
    green.push_back({{"pair", g.pair},
                     {"step", g.step},
                     {"between", {g.between.lo, g.between.hi}},
                     {"eps", g.eps},
                     {"green_at_fit", std::isnan(g.green_at_fit) ? json(nullptr) : json(g.green_at_fit)},
                     {"green_final", g.green_final},
                     {"met", g.met}});
  }
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  const ScConfig& c = tr.config;
  return json{{"schedule", {{"eps", c.eps}, {"lengths", c.lengths}}},
              {"segments", segs},
              {"final_set", bandset_json(tr.final_set)},
              {"divisor", tr.divisor.points},
              {"masses", masses},
              {"total_mass", tr.total_mass},
              {"ell1", tr.ell1},
              {"constraint_audit", r_audit},
              {"green_audit", green},
              {"mass_checks", checks},
              {"mass_checks_passed", rep.all_passed()}};
}

std::string sc_segments_csv(const ScTrace& tr) {
  std::string out = "label,role,generation,step,lo,hi";
  for (int k = 1; k <= tr.config.depth; ++k) out += ",mass_mu" + std::to_string(k);
  out += "\n";
  for (const auto& s : tr.segments) {
    out += s.label + "," + role_name(s.role) + "," + std::to_string(s.generation) + "," + std::to_string(s.step) + "," +
           format_double(s.seg.lo) + "," + format_double(s.seg.hi);
    for (int k = 1; k <= tr.config.depth; ++k) out += "," + (s.step <= k ? format_double(tr.mass_of(s.label, k)) : "");
    out += "\n";
  }
  return out;
}

json acceptance_json(const std::vector<CriterionResult>& results) {
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    rows.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"metrics", metrics}});
    all = all && r.passed;
  }
  return json{{"criteria", rows}, {"all_passed", all}};
}

}  // namespace widomlab
