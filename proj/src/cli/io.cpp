#include "cli/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace owm::cli {

namespace fs = std::filesystem;

const std::vector<std::string> kSweepHeader{"axis_value", "e_fn", "r_star", "q_star", "method"};

const std::vector<std::string> kSimulateHeader{
    "n",      "trials",  "failures",           "p_hat",           "ci_low",
    "ci_high", "empirical_exponent", "theory_exponent", "master_seed"};

const std::vector<std::string> kCompareHeader{
    "lambda",           "theory_e_fn",    "optimal_failures",  "optimal_p_hat",
    "optimal_ci_low",   "optimal_ci_high", "optimal_empirical_exponent",
    "sign_failures",    "sign_p_hat",      "sign_ci_low",       "sign_ci_high",
    "sign_empirical_exponent", "lambda1", "lambda2", "n", "trials", "master_seed"};

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

}  // namespace

std::vector<double> read_signal(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open signal file " + path.string());
    std::vector<double> samples;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string cell = trim(line);
        if (cell.empty()) {
            // Only a trailing blank line is tolerated.
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw FormatError(path.string() + ":" + std::to_string(line_number) + ": empty line");
        }
        double value = 0.0;
        const char* begin = cell.data();
        const char* end = cell.data() + cell.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
            throw FormatError(path.string() + ":" + std::to_string(line_number) +
                              ": expected one finite real, got '" + cell + "'");
        }
        samples.push_back(value);
    }
    if (samples.empty()) throw FormatError(path.string() + ": no samples");
    return samples;
}

std::string format_signal(const std::vector<double>& samples) {
    std::string out;
    out.reserve(samples.size() * 24);
    for (double value : samples) {
        out += format_number(value);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    const fs::path target = fs::absolute(path);
    const fs::path temp =
        target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string() + ": " + std::strerror(errno));
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw IoError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw IoError("cannot move " + temp.string() + " into place: " + ec.message());
    }
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::logic_error("CSV row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto emit = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return os.str();
}

nlohmann::json CsvTable::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
        nlohmann::json object = nlohmann::json::object();
        for (std::size_t i = 0; i < header_.size(); ++i) {
            const std::string& cell = row[i];
            const char* end = cell.data() + cell.size();
            std::uint64_t integer = 0;
            const auto int_parse = std::from_chars(cell.data(), end, integer);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
            if (cell == "nan" || cell == "inf" || cell == "-inf") {
                object[header_[i]] = nullptr;
            } else if (int_parse.ec == std::errc{} && int_parse.ptr == end) {
                object[header_[i]] = integer;
            } else if (ec == std::errc{} && ptr == end) {
                object[header_[i]] = value;
            } else {
                object[header_[i]] = cell;
            }
        }
        rows.push_back(std::move(object));
    }
    return rows;
}

std::vector<std::string> simulate_row(const TrialBatchResult& batch, double theory) {
    return {std::to_string(batch.n),
            std::to_string(batch.trials),
            std::to_string(batch.failures),
            format_number(batch.p_hat),
            format_number(batch.ci_low),
            format_number(batch.ci_high),
            format_number(batch.empirical_exponent),
            format_number(theory),
            std::to_string(batch.master_seed)};
}

nlohmann::json number_or_null(double value) {
    if (!std::isfinite(value)) return nullptr;
    return value;
}

nlohmann::json exponent_json(const ExponentReport& report, std::optional<std::uint64_t> seed) {
    nlohmann::json j;
    j["e_fn"] = report.e_fn;
    j["r_star"] = number_or_null(report.r_star);
    j["q_star"] = number_or_null(report.q_star);
    j["method"] = to_string(report.method);
    j["zero_reason"] = report.zero_reason ? nlohmann::json(to_string(*report.zero_reason)) : nullptr;
    j["seed"] = seed ? nlohmann::json(*seed) : nullptr;
    return j;
}

nlohmann::json detection_json(const DetectionReport& report, std::uint64_t seed) {
    nlohmann::json j;
    j["rho_abs"] = report.rho_abs;
    j["empirical_mi"] = number_or_null(report.empirical_mi);
    j["threshold"] = report.threshold;
    j["decision"] = report.present ? "present" : "absent";
    j["seed"] = seed;
    return j;
}

fs::path series_path(const fs::path& base, const std::string& name, double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%g", value);
    fs::path out = base;
    out.replace_filename(base.stem().string() + "_" + name + "_" + buffer +
                         base.extension().string());
    return out;
}

}  // namespace owm::cli
