#include "bhlab/reports.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bhlab {

using nlohmann::ordered_json;

std::string profile_to_csv(const PsiProfile& profile) {
  std::string out = "n,psi,exact\n";
  for (const auto& p : profile.points) {
    out += std::to_string(p.n) + ',' + std::to_string(p.psi) + ',' + (p.exact ? "true" : "false") + '\n';
  }
  return out;
}

PsiProfile parse_profile_csv(std::string_view text) {
  PsiProfile profile;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != "n,psi,exact") throw ParseError(1, "expected header 'n,psi,exact'");
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(line_no, "expected three comma-separated fields");
    PsiPoint p;
    auto field_n = line.substr(0, c1);
    auto field_psi = line.substr(c1 + 1, c2 - c1 - 1);
    auto field_exact = line.substr(c2 + 1);
    auto parse_u64 = [&](std::string_view f, std::uint64_t& v) {
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ParseError(line_no, "expected an integer, got '" + std::string(f) + "'");
      }
    };
    parse_u64(field_n, p.n);
    parse_u64(field_psi, p.psi);
    if (field_exact == "true") {
      p.exact = true;
    } else if (field_exact != "false") {
      throw ParseError(line_no, "exact must be true or false");
    }
    profile.points.push_back(p);
  }
  if (line_no == 0) throw ParseError(1, "empty profile");
  return profile;
}

ordered_json profile_to_json(const PsiProfile& profile) {
  ordered_json n = ordered_json::array(), psi = ordered_json::array(), exact = ordered_json::array();
  for (const auto& p : profile.points) {
    n.push_back(p.n);
    psi.push_back(p.psi);
    exact.push_back(p.exact);
  }
  return ordered_json{{"n", n}, {"psi", psi}, {"exact", exact}};
}

PsiProfile profile_from_json(const ordered_json& doc) {
  const auto& n = doc.at("n");
  const auto& psi = doc.at("psi");
  const auto& exact = doc.at("exact");
  if (n.size() != psi.size() || n.size() != exact.size()) {
    throw std::invalid_argument("profile arrays differ in length");
  }
  PsiProfile profile;
  for (std::size_t i = 0; i < n.size(); ++i) {
    profile.points.push_back({n[i].get<std::uint64_t>(), psi[i].get<std::uint64_t>(), exact[i].get<bool>()});
  }
  return profile;
}

ordered_json settings_to_json(const OptimizerSettings& s) {
  return ordered_json{{"restarts", s.restarts},     {"max_iterations", s.max_iterations},
                      {"step_size", s.step_size},   {"tolerance", s.tolerance},
                      {"grid_resolution", s.grid_resolution}, {"seed", s.seed}};
}

namespace {

ordered_json step_json(const StepSummary& s, const char* kind) {
  return ordered_json{{"max_margin", s.max_margin}, {"pass", s.pass}, {"kind", kind}};
}

}  // namespace

ordered_json report_to_json(const VerificationReport& r) {
  ordered_json trials = ordered_json::array();
  for (const auto& t : r.trials) {
    trials.push_back(ordered_json{{"seed", t.seed},
                                  {"sup_poly", t.sup_poly},
                                  {"sup_form", t.sup_form},
                                  {"quotient", t.quotient},
                                  {"khinchine_margin", t.khinchine_margin},
                                  {"polarization_margin", t.polarization_margin},
                                  {"max_modulus_margin", t.max_modulus_margin},
                                  {"holder_margin", t.holder_margin},
                                  {"bayart_ratio", t.bayart_ratio}});
  }
  ordered_json doc;
  doc["lambda_label"] = r.lambda_label;
  doc["m"] = r.m;
  doc["d"] = r.d;
  doc["trial_count"] = r.trials.size();
  doc["settings"] = settings_to_json(r.settings);
  doc["slack"] = r.slack;
  doc["c_hat"] = r.c_hat;
  doc["max_quotient"] = r.max_quotient;
  doc["theorem_bound"] = r.theorem_bound.value;
  doc["theorem_factors"] = ordered_json{{"e_factor", r.theorem_bound.e_factor},
                                        {"constant_factor", r.theorem_bound.constant_factor},
                                        {"khinchine_factor", r.theorem_bound.khinchine_factor}};
  doc["theorem_margin"] = r.theorem_margin;
  doc["theorem_pass"] = r.theorem_pass;
  doc["steps"] = ordered_json{{"khinchine", step_json(r.khinchine, "soft")},
                              {"polarization", step_json(r.polarization, "soft")},
                              {"max_modulus", step_json(r.max_modulus, "soft")},
                              {"holder", step_json(r.holder, "hard")}};
  doc["trials"] = std::move(trials);
  return doc;
}

void write_report(const PsiProfile& profile, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::csv) {
    out << profile_to_csv(profile);
  } else {
    out << profile_to_json(profile).dump(2) << '\n';
  }
}

void write_report(const VerificationReport& report, ReportFormat format, std::ostream& out) {
  if (format != ReportFormat::json) throw std::invalid_argument("verification reports are JSON only");
  out << report_to_json(report).dump(2) << '\n';
}

void write_report(const PsiProfile& profile, ReportFormat format, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_report(profile, format, buf);
  write_text_file(path, buf.str());
}

void write_report(const VerificationReport& report, ReportFormat format,
                  const std::filesystem::path& path) {
  std::ostringstream buf;
  write_report(report, format, buf);
  write_text_file(path, buf.str());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace bhlab
