#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bhlab/bhverify.hpp"
#include "bhlab/combdim.hpp"

namespace bhlab {

enum class ReportFormat { json, csv };

/// `n,psi,exact` header, one row per n.
std::string profile_to_csv(const PsiProfile& profile);
PsiProfile parse_profile_csv(std::string_view text);

nlohmann::ordered_json profile_to_json(const PsiProfile& profile);
PsiProfile profile_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json settings_to_json(const OptimizerSettings& settings);
nlohmann::ordered_json report_to_json(const VerificationReport& report);

void write_report(const PsiProfile& profile, ReportFormat format, std::ostream& out);
/// Reports only have a JSON form; csv throws std::invalid_argument.
void write_report(const VerificationReport& report, ReportFormat format, std::ostream& out);

void write_report(const PsiProfile& profile, ReportFormat format, const std::filesystem::path& path);
void write_report(const VerificationReport& report, ReportFormat format,
                  const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Throws std::runtime_error if the destination cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace bhlab
