#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "spinbath/analysis.hpp"
#include "spinbath/model.hpp"

namespace spinbath {

// All writers emit LF line endings and doubles as %.17g so repeated runs
// produce byte-identical files.
std::string format_double(double x);

struct CsvColumn {
    std::string name;
    std::vector<double> data;
};

struct CsvTable {
    std::vector<CsvColumn> columns;

    const std::vector<double>& column(const std::string& name) const;
    std::size_t rows() const;
};

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Environment files hold a JSON array of {g, p_up, phase_alpha, phase_beta}
// with p_up = |alpha|^2, alpha = sqrt(p_up) e^{i phase_alpha},
// beta = sqrt(1 - p_up) e^{i phase_beta}.
nlohmann::json environment_to_json(const Environment& env);
Environment environment_from_json(const nlohmann::json& doc);
void save_environment(const Environment& env, const std::filesystem::path& path);
Environment load_environment(const std::filesystem::path& path);

nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

std::string decay_model_name(DecayModel model);
std::string decay_class_name(DecayClass verdict);
nlohmann::json fit_to_json(const DecayFit& fit);
nlohmann::json slope_to_json(const SlopeFit& fit);
nlohmann::json classification_to_json(const DecayClassification& cls);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string file_digest(const std::filesystem::path& path);

std::string utc_timestamp_now();

}  // namespace spinbath
