#include <cmath>
#include <iomanip>
#include <sstream>

#include "momsep/app.hpp"

namespace momsep::app {

namespace {

std::string fmt(double x, int digits = 10) {
  if (x == 0.0) x = 0.0;  // no "-0"
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string fmt(Complex z) {
  if (std::abs(z.imag()) < 1e-15) return fmt(z.real(), 6);
  std::ostringstream os;
  os << fmt(z.real(), 6) << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag()), 6) << "i";
  return os.str();
}

void render_matrix(std::ostringstream& os, const Matrix& m, const std::string& indent) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << fmt(m(i, j));
    os << "]\n";
  }
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json verdict_to_json(const Verdict& v) {
  Json j = {{"criterion", v.criterion}, {"outcome", to_string(v.outcome)}, {"boundary", v.boundary},
            {"threshold", v.threshold}, {"tolerance", v.tolerance}};
  Json w = Json::object();
  for (const auto& x : v.witnesses) w[x.name] = x.value;
  j["witnesses"] = w;
  Json prov = Json::object();
  if (!v.operator_class.empty()) prov["class"] = v.operator_class;
  if (!v.r.empty()) prov["r"] = v.r;
  if (!v.map.empty()) prov["map"] = v.map;
  if (!v.side.empty()) prov["side"] = v.side;
  j["provenance"] = prov;
  if (!v.note.empty()) j["note"] = v.note;
  // Entangled verdicts carry what is needed to recheck them by hand.
  if (v.witness_matrix && (v.entangled() || v.boundary)) j["witness_matrix"] = matrix_to_json(*v.witness_matrix);
  return j;
}

Json report_to_json(const Report& report) {
  Json states = Json::array();
  for (const auto& s : report.states) {
    Json js = {{"label", s.label}, {"source", s.source}};
    if (!s.error.empty()) js["error"] = s.error;
    Json results = Json::array();
    for (const auto& r : s.results) {
      Json jr = {{"name", r.name}};
      if (!r.error.empty()) {
        jr["error"] = r.error;
      } else {
        Json vs = Json::array();
        for (const auto& v : r.verdicts) vs.push_back(verdict_to_json(v));
        jr["verdicts"] = vs;
      }
      results.push_back(jr);
    }
    js["results"] = results;
    js["summary"] = s.summary();
    states.push_back(js);
  }
  return {{"schema", kReportSchema}, {"states", states}, {"any_entangled", report.any_entangled()}};
}

std::string render_human(const Report& report) {
  std::ostringstream os;
  if (report.states.empty()) os << "(no states)\n";
  for (const auto& s : report.states) {
    os << "== " << s.label << "  [" << s.source << "]\n";
    if (!s.error.empty()) {
      os << "  error: " << s.error << "\n\n";
      continue;
    }
    if (s.results.empty()) os << "  (no criteria)\n";
    for (const auto& r : s.results) {
      if (!r.error.empty()) {
        os << "  " << std::left << std::setw(24) << r.name << "ERROR  " << r.error << "\n";
        continue;
      }
      for (const auto& v : r.verdicts) {
        os << "  " << std::left << std::setw(24) << v.criterion << std::setw(13) << to_string(v.outcome);
        for (const auto& w : v.witnesses) os << " " << w.name << "=" << fmt(w.value);
        if (v.boundary) os << " (boundary)";
        os << "\n";
        std::string prov;
        if (!v.operator_class.empty()) prov += " class " + v.operator_class;
        if (!v.map.empty()) prov += " map " + v.map;
        if (!v.side.empty()) prov += " side " + v.side;
        if (!v.r.empty()) {
          prov += " r=(";
          for (std::size_t i = 0; i < v.r.size(); ++i) prov += (i ? "," : "") + std::to_string(v.r[i]);
          prov += ")";
        }
        prov += " tol " + fmt(v.tolerance, 3);
        os << "      " << prov.substr(prov[0] == ' ' ? 1 : 0) << "\n";
        if (!v.note.empty()) os << "      note: " << v.note << "\n";
        if (v.entangled() && v.witness_matrix && v.witness_matrix->rows() <= 16 && v.witness_matrix->cols() <= 16) {
          render_matrix(os, *v.witness_matrix, "      ");
        }
      }
    }
    os << "  summary: " << s.summary() << "\n\n";
  }
  return os.str();
}

}  // namespace momsep::app
