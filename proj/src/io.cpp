#include "spinbath/io.hpp"

#include <cinttypes>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinbath/util.hpp"

namespace spinbath {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (const auto& c : columns) {
        if (c.name == name) return c.data;
    }
    throw std::invalid_argument("csv column not found: " + name);
}

std::size_t CsvTable::rows() const {
    return columns.empty() ? 0 : columns.front().data.size();
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
    if (columns.empty()) {
        throw std::invalid_argument("write_csv: no columns");
    }
    const std::size_t rows = columns.front().data.size();
    for (const auto& c : columns) {
        if (c.data.size() != rows) {
            throw std::invalid_argument("write_csv: column " + c.name + " has mismatched length");
        }
    }
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c > 0) out += ',';
        out += columns[c].name;
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c > 0) out += ',';
            out += format_double(columns[c].data[r]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument(path.string() + ": empty csv");
    }
    CsvTable table;
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) {
        table.columns.push_back(CsvColumn{field, {}});
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::size_t c = 0;
        while (std::getline(row, field, ',')) {
            if (c >= table.columns.size()) {
                throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                            ": too many fields");
            }
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (end == field.c_str()) {
                throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                            ": not a number: " + field);
            }
            table.columns[c].data.push_back(v);
            ++c;
        }
        if (c != table.columns.size()) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": too few fields");
        }
    }
    return table;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

nlohmann::json environment_to_json(const Environment& env) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& spin : env.spins()) {
        nlohmann::json item;
        item["g"] = spin.g();
        item["p_up"] = spin.p_up();
        item["phase_alpha"] = std::abs(spin.alpha()) > 0.0 ? std::arg(spin.alpha()) : 0.0;
        item["phase_beta"] = std::abs(spin.beta()) > 0.0 ? std::arg(spin.beta()) : 0.0;
        arr.push_back(std::move(item));
    }
    return arr;
}

Environment environment_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        throw std::invalid_argument("environment: expected a JSON array of spins");
    }
    std::vector<BathSpin> spins;
    spins.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        const std::string at = "environment[" + std::to_string(i) + "]";
        if (!item.is_object()) {
            throw std::invalid_argument(at + ": expected an object");
        }
        if (!item.contains("g") || !item["g"].is_number()) {
            throw std::invalid_argument(at + ".g: expected a number");
        }
        if (!item.contains("p_up") || !item["p_up"].is_number()) {
            throw std::invalid_argument(at + ".p_up: expected a number");
        }
        const double g = item["g"].get<double>();
        const double p = item["p_up"].get<double>();
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(at + ".p_up: must lie in [0, 1]");
        }
        double phase_a = 0.0;
        double phase_b = 0.0;
        if (item.contains("phase_alpha")) {
            if (!item["phase_alpha"].is_number()) {
                throw std::invalid_argument(at + ".phase_alpha: expected a number");
            }
            phase_a = item["phase_alpha"].get<double>();
        }
        if (item.contains("phase_beta")) {
            if (!item["phase_beta"].is_number()) {
                throw std::invalid_argument(at + ".phase_beta: expected a number");
            }
            phase_b = item["phase_beta"].get<double>();
        }
        spins.emplace_back(g, std::polar(std::sqrt(p), phase_a),
                           std::polar(std::sqrt(1.0 - p), phase_b));
    }
    return Environment(std::move(spins));
}

void save_environment(const Environment& env, const std::filesystem::path& path) {
    save_json_file(environment_to_json(env), path);
}

Environment load_environment(const std::filesystem::path& path) {
    return environment_from_json(load_json_file(path));
}

nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(origin + ": " + e.what());
    }
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    return parse_json_text(read_text_file(path), path.string());
}

void save_json_file(const nlohmann::json& doc, const std::filesystem::path& path) {
    write_text_file(path, doc.dump(2) + "\n");
}

std::string decay_model_name(DecayModel model) {
    return model == DecayModel::Gaussian ? "gaussian" : "exponential";
}

std::string decay_class_name(DecayClass verdict) {
    switch (verdict) {
        case DecayClass::Gaussian: return "gaussian";
        case DecayClass::Exponential: return "exponential";
        default: return "ambiguous";
    }
}

nlohmann::json fit_to_json(const DecayFit& fit) {
    nlohmann::json j;
    j["model"] = decay_model_name(fit.model);
    // +inf (no decay) is reported as null; JSON has no infinity.
    j["timescale"] = std::isfinite(fit.timescale) ? nlohmann::json(fit.timescale)
                                                  : nlohmann::json(nullptr);
    j["amplitude"] = fit.amplitude;
    j["residual_rms"] = fit.residual_rms;
    j["window"] = {{"t_lo", fit.window.t_lo}, {"t_hi", fit.window.t_hi}};
    return j;
}

nlohmann::json slope_to_json(const SlopeFit& fit) {
    nlohmann::json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["std_error"] = fit.std_error;
    j["window"] = {{"t_lo", fit.window.t_lo}, {"t_hi", fit.window.t_hi}};
    return j;
}

nlohmann::json classification_to_json(const DecayClassification& cls) {
    nlohmann::json j;
    j["verdict"] = decay_class_name(cls.verdict);
    j["gaussian"] = fit_to_json(cls.gaussian);
    j["exponential"] = fit_to_json(cls.exponential);
    return j;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    return fnv1a64(read_text_file(path));
}

std::string file_digest(const std::filesystem::path& path) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64_file(path));
    return buf;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace spinbath
