#pragma once

// Comparison tables built from the performance model, rendered as CSV or JSON.

#include <string>
#include <string_view>
#include <vector>

#include "picaso/perfmodel.hpp"

namespace picaso {

enum class ReportKind : std::uint8_t { Latency, Throughput, MemEff, Scalability, CycleFormulas };

std::string_view to_string(ReportKind kind);
/// Throws UnknownKind.
ReportKind parse_report_kind(std::string_view text);

enum class OutputFormat : std::uint8_t { Csv, Json };

std::string_view to_string(OutputFormat f);
/// Throws std::invalid_argument.
OutputFormat parse_format(std::string_view text);

struct ReportSpec {
    ReportKind kind = ReportKind::Latency;
    std::vector<int> precisions{4, 8, 16};
    int q = 16;
    std::string device = "U55";
    std::vector<perf::Arch> archs;  // empty: every compared architecture
    OutputFormat format = OutputFormat::Csv;
    bool booth_effective = false;
    bool percent = false;
    perf::ThroughputModel throughput_model = perf::ThroughputModel::MultOnly;

    /// Throws std::invalid_argument on empty precisions, UnknownDevice when
    /// the device is missing from the catalogue.
    void validate(const perf::Catalog& catalog) const;
};

/// Architectures compared in the latency, throughput and memory reports.
const std::vector<perf::Arch>& compared_archs();

/// Renders the table. Output is a pure function of (spec, catalog).
std::string render_report(const ReportSpec& spec, const perf::Catalog& catalog);

}  // namespace picaso
