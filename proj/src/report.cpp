#include "sketchact/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace sketchact {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  std::string out = buf;
  if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
  return out;
}

std::string pct(const std::optional<double>& v) { return v ? fmt("%.1f", *v) : "-"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string padr(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

const Rates* find_cell(const std::vector<CellReport>& cells, const std::string& scene, const std::string& cat) {
  for (const auto& c : cells)
    if (c.scene_type == scene && c.category == cat) return &c.rates;
  return nullptr;
}

std::string turn_set_of(const ResultsFile& r) { return r.rows.empty() ? "-" : r.rows.front().turn_set; }

}  // namespace

std::string render_plan_text(const Json& plan) {
  std::ostringstream out;
  out << padr("seg", 4) << pad("length_m", 9) << pad("dpsi_deg", 10) << pad("corners", 8) << "  " << padr("rule", 7)
      << padr("action", 12) << pad("conf", 6) << "\n";
  for (const auto& s : plan["segments"]) {
    const Json& d = s["decision"];
    out << padr(std::to_string(s["index"].get<std::size_t>()), 4) << pad(fmt("%.3f", s["length_m"]), 9)
        << pad(fmt("%.1f", s["delta_yaw_deg"]), 10) << pad(std::to_string(s["corners"].get<std::size_t>()), 8)
        << "  " << padr(d["rule"].get<std::string>(), 7) << padr(d["action"].get<std::string>(), 12)
        << pad(fmt("%.2f", d["confidence"]), 6);
    if (s.contains("coverage_plan")) out << "  lanes=" << s["coverage_plan"]["lanes"].get<std::size_t>();
    out << "\n";
  }
  out << "actions:";
  for (const auto& a : plan["actions"]) out << " " << a.get<std::string>();
  out << "\n";
  for (const auto& w : plan["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  return out.str();
}

std::string render_trial_summary(const Json& trial) {
  const Json& s = trial["summary"];
  std::ostringstream out;
  out << "segments=" << s["segments"].get<std::size_t>() << " executed=" << s["executed"].get<std::size_t>()
      << " succeeded=" << s["successes"].get<std::size_t>() << " adherent=" << s["adherent"].get<std::size_t>()
      << " task_completed=" << (s["ftcr"].get<bool>() ? "yes" : "no")
      << " task_adherent=" << (s["ftspar"].get<bool>() ? "yes" : "no")
      << " steps=" << trial["steps_used"].get<std::size_t>() << "/" << trial["step_budget"].get<std::size_t>()
      << " dtw_per_m=" << fmt("%.4f", s["dtw_per_m"].get<double>())
      << " encounters=" << s["encounters_handled"].get<std::size_t>() << "/" << s["encounters"].get<std::size_t>();
  if (trial["safety_violation"].get<bool>()) out << " SAFETY_HALT";
  if (trial["timed_out"].get<bool>()) out << " TIMEOUT";
  out << "\n";
  return out.str();
}

std::string render_report_text(const std::vector<ResultsFile>& results) {
  std::ostringstream out;
  const char* cats[] = {"short", "medium", "long"};
  for (std::size_t f = 0; f < results.size(); ++f) {
    const ResultsFile& r = results[f];
    const MetricsReport& m = r.report;
    if (results.size() > 1) out << "== results " << f + 1 << " (turn set " << turn_set_of(r) << ") ==\n";
    out << padr("scene type", 12);
    for (const char* c : cats) out << " | " << padr(c, 27);
    out << "\n" << padr("", 12);
    for (std::size_t k = 0; k < 3; ++k) out << " | " << pad("SSSR", 6) << pad("SSSPAR", 7) << pad("FTCR", 7) << pad("FTSPAR", 7);
    out << "\n";
    auto row = [&](const std::string& label, auto lookup) {
      out << padr(label, 12);
      for (const char* c : cats) {
        const Rates* rt = lookup(c);
        out << " | " << pad(rt ? pct(rt->sssr) : "-", 6) << pad(rt ? pct(rt->ssspar) : "-", 7)
            << pad(rt ? pct(rt->ftcr) : "-", 7) << pad(rt ? pct(rt->ftspar) : "-", 7);
      }
      out << "\n";
    };
    std::vector<std::string> scenes;
    for (const auto& c : m.cells)
      if (std::find(scenes.begin(), scenes.end(), c.scene_type) == scenes.end()) scenes.push_back(c.scene_type);
    for (const auto& s : scenes) row(s, [&](const char* c) { return find_cell(m.cells, s, c); });
    row("all", [&](const char* c) { return find_cell(m.by_category, "all", c); });

    const auto& o = m.overall;
    out << "overall: trials=" << o.trials << " SSSR=" << pct(o.sssr) << " SSSPAR=" << pct(o.ssspar)
        << " (over executed " << pct(o.ssspar_over_executed) << ") FTCR=" << pct(o.ftcr) << " FTSPAR=" << pct(o.ftspar)
        << " UOMS=" << pct(o.uoms) << " DTW/m=" << fmt("%.4f", o.mean_dtw_per_m) << "\n";
    const std::size_t fails = m.failure_thirds[0] + m.failure_thirds[1] + m.failure_thirds[2];
    out << "failure position:";
    const char* names[] = {"first third", "middle third", "final third"};
    for (std::size_t k = 0; k < 3; ++k)
      out << (k ? ", " : " ") << names[k] << " " << m.failure_thirds[k] << " ("
          << (fails ? fmt("%.1f", 100.0 * double(m.failure_thirds[k]) / double(fails)) : "-") << "%)";
    out << "\n";
  }
  if (results.size() > 1) {
    out << "\nturn-set comparison\n"
        << padr("turn set", 14) << pad("SSSR", 7) << pad("SSSPAR", 8) << pad("FTCR", 7) << pad("FTSPAR", 8) << "\n";
    for (const auto& r : results) {
      const auto& o = r.report.overall;
      out << padr(turn_set_of(r), 14) << pad(pct(o.sssr), 7) << pad(pct(o.ssspar), 8) << pad(pct(o.ftcr), 7)
          << pad(pct(o.ftspar), 8) << "\n";
    }
  }
  return out.str();
}

std::string render_report_csv(const std::vector<ResultsFile>& results) {
  std::ostringstream out;
  out << "table,results,turn_set,scene_type,category,trials,sssr,ssspar,ftcr,ftspar,uoms,dtw_per_m\n";
  auto line = [&](const char* table, std::size_t f, const ResultsFile& r, const std::string& scene,
                  const std::string& cat, const Rates& rt) {
    auto v = [](const std::optional<double>& x) { return x ? fmt("%.4f", *x) : std::string(); };
    out << table << "," << f + 1 << "," << '"' << turn_set_of(r) << '"' << "," << scene << "," << cat << ","
        << rt.trials << "," << v(rt.sssr) << "," << v(rt.ssspar) << "," << v(rt.ftcr) << "," << v(rt.ftspar) << ","
        << v(rt.uoms) << "," << fmt("%.6f", rt.mean_dtw_per_m) << "\n";
  };
  for (std::size_t f = 0; f < results.size(); ++f) {
    const auto& m = results[f].report;
    for (const auto& c : m.cells) line("cell", f, results[f], c.scene_type, c.category, c.rates);
    for (const auto& c : m.by_category) line("category", f, results[f], c.scene_type, c.category, c.rates);
    line("overall", f, results[f], "all", "all", m.overall);
  }
  out << "\ntable,results,first_third,middle_third,final_third\n";
  for (std::size_t f = 0; f < results.size(); ++f) {
    const auto& t = results[f].report.failure_thirds;
    out << "failure_position," << f + 1 << "," << t[0] << "," << t[1] << "," << t[2] << "\n";
  }
  return out.str();
}

}  // namespace sketchact
