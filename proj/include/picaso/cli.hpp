#pragma once

// Command implementations behind the `picaso` tool. Each returns a process
// exit status and writes to the given streams.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "picaso/machine.hpp"
#include "picaso/report.hpp"

namespace picaso {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Wordline layout of the demo workloads: multiplicand, multiplier and the
/// 2n-bit product (accumulated in place) occupy the low 4n rows.
struct MacLayout {
    int n;
    OperandLayout a() const { return {0, n, true}; }
    OperandLayout b() const { return {static_cast<Row>(n), n, true}; }
    OperandLayout product() const { return {static_cast<Row>(2 * n), 2 * n, true}; }
    OperandLayout sum(int q) const;
};

struct MacResult {
    int n = 0;
    int q = 0;
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    std::vector<std::int64_t> lane_products;  // simulated, one per PE
    std::int64_t array_sum = 0;
    std::int64_t oracle_sum = 0;
    bool products_match = false;
    std::int64_t mult_cycles = 0;
    std::int64_t accum_cycles = 0;
    std::int64_t mult_formula = 0;
    std::int64_t accum_formula_n = 0;   // closed form at the operand width
    std::int64_t accum_formula_2n = 0;  // closed form at the product width

    bool match() const { return products_match && array_sum == oracle_sum; }
};

/// Sum over q lanes of a[i]*b[i] on a 1 x q/16 array. Throws InvalidQ,
/// ValueOverflow or std::invalid_argument.
MacResult run_mac(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, int n,
                  PipelineConfig pipe = PipelineConfig::full_pipe(), PimArray* final_state = nullptr);

/// Seeded random signed n-bit operands.
std::vector<std::int64_t> random_operands(int count, int n, std::uint64_t seed, std::uint64_t stream);

struct GemvResult {
    int n = 0;
    int q = 0;
    std::vector<std::int64_t> y;
    std::vector<std::int64_t> oracle;
    std::int64_t cycles = 0;

    bool match() const { return y == oracle; }
};

/// y = W x for an m x q matrix: grid row r holds matrix row r across its
/// q lanes, x is replicated in every grid row, and one multiply plus one
/// accumulate-row program computes all m outputs in lock-step.
GemvResult run_gemv(const std::vector<std::vector<std::int64_t>>& w,
                    const std::vector<std::int64_t>& x, int n,
                    PipelineConfig pipe = PipelineConfig::full_pipe(),
                    PimArray* final_state = nullptr);

struct SimulateOptions {
    std::string workload = "mac";
    int n = 8;
    int q = 16;
    int rows = 4;  // matrix rows for gemv
    std::uint64_t seed = 1;
    PipelineKind pipeline = PipelineKind::FullPipe;
    OutputFormat format = OutputFormat::Csv;  // Csv selects the plain-text dump
};

struct AssembleOptions {
    std::string op = "mult";  // add | sub | mult | accum
    int n = 8;
    int q = 16;
    PipelineKind pipeline = PipelineKind::FullPipe;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_report(const ReportSpec& spec, const perf::Catalog& catalog, std::ostream& out,
               std::ostream& err);
int cmd_assemble(const AssembleOptions& opt, std::ostream& out, std::ostream& err);
/// Runs the seeded workload and prints the final array state as JSON.
int cmd_dump_state(const SimulateOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace picaso
