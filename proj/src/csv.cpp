#include "qcd/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace qcd::csv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // binary: no platform newline surprises
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_spike_csv(const SpikeTrialSet& set, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "trial";
    for (std::size_t b = 0; b < set.bins; ++b) out << ",bin_" << b;
    out << "\n";
    for (std::size_t t = 0; t < set.trials; ++t) {
        out << (t + 1);
        for (std::size_t b = 0; b < set.bins; ++b) {
            out << ',' << static_cast<int>(set.at(t, b));
        }
        out << "\n";
    }
}

SpikeTrialSet read_spike_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(1, "missing header");
    }
    line_no = 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_fields(line);
    if (header.empty() || header[0] != "trial") {
        throw ParseError(1, "expected header starting with 'trial'");
    }
    const std::size_t bins = header.size() - 1;
    if (bins == 0) {
        throw ParseError(1, "header declares no bins");
    }

    SpikeTrialSet set;
    set.bins = bins;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != bins + 1) {
            throw ParseError(line_no, "expected " + std::to_string(bins + 1) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        for (std::size_t b = 0; b < bins; ++b) {
            const std::string& f = fields[b + 1];
            if (f == "0") {
                set.spikes.push_back(0);
            } else if (f == "1") {
                set.spikes.push_back(1);
            } else {
                throw ParseError(line_no, "spike value must be 0 or 1, got '" + f + "'");
            }
        }
        set.trials += 1;
    }
    if (set.trials == 0) {
        throw ParseError(line_no + 1, "no data rows");
    }
    set.change_trial = set.trials + 1;
    return set;
}

void write_report_csv(const StoppingReport& report, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "index,statistic,threshold,stopped\n";
    for (std::size_t i = 0; i < report.statistic_path.size(); ++i) {
        const bool stopped =
            report.detected && report.stopping_time && i + 1 == *report.stopping_time;
        out << (i + 1) << ',' << format_double(report.statistic_path[i]) << ','
            << format_double(report.threshold) << ',' << (stopped ? 1 : 0) << "\n";
    }
}

void write_calibration_csv(const CalibrationResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "threshold,estimated_arl,arl_std_error,runs,censored_runs,lower_bound,target_reached\n";
    out << format_double(result.threshold) << ',' << format_double(result.estimated_arl) << ','
        << format_double(result.arl_std_error) << ',' << result.runs << ','
        << result.censored_runs << ',' << (result.lower_bound ? 1 : 0) << ','
        << (result.target_reached ? 1 : 0) << "\n";
}

void write_tradeoff_csv(std::span<const TradeoffRow> rows, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "threshold,estimated_arl,arl_lower_bound,mean_delay,missed,censored\n";
    for (const TradeoffRow& row : rows) {
        out << format_double(row.threshold) << ',' << format_double(row.estimated_arl) << ','
            << (row.arl_lower_bound ? 1 : 0) << ',' << format_double(row.mean_delay) << ','
            << row.missed << ',' << row.censored << "\n";
    }
}

} // namespace qcd::csv
