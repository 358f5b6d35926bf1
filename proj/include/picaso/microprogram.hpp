#pragma once

// Control-word program builders for the PE-block array and the pipeline
// hazard scheduler. Every builder returns a FULL_PIPE-legal schedule.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "picaso/control_word.hpp"
#include "picaso/datapath.hpp"

namespace picaso {

enum class PipelineKind : std::uint8_t { SingleCycle, RfPipe, OpPipe, FullPipe };

struct PipelineConfig {
    PipelineKind kind = PipelineKind::FullPipe;
    int hazard_distance = 3;

    static PipelineConfig single_cycle() { return {PipelineKind::SingleCycle, 0}; }
    static PipelineConfig rf_pipe() { return {PipelineKind::RfPipe, 1}; }
    static PipelineConfig op_pipe() { return {PipelineKind::OpPipe, 1}; }
    static PipelineConfig full_pipe() { return {PipelineKind::FullPipe, 3}; }
    static PipelineConfig of(PipelineKind kind);
};

std::string_view to_string(PipelineKind kind);
std::optional<PipelineKind> parse_pipeline(std::string_view text);

enum class ProgramKind : std::uint8_t { Empty, AddSub, MultBooth, AccumulateRow, Custom };

std::string_view to_string(ProgramKind kind);

struct ProgramMeta {
    ProgramKind kind = ProgramKind::Empty;
    int n = 0;            // operand width in bits
    int q = 0;            // columns accumulated
    AluOp op = AluOp::Add;
    Row dst = 0;
    Row src_a = 0;
    Row src_b = 0;
    int result_width = 0;
};

/// Immutable control-word sequence. `declared_cycles()` always equals the
/// number of words; `formula_cycles()` is the closed-form budget the
/// builder targets, when one exists.
class Microprogram {
public:
    Microprogram() = default;
    Microprogram(std::vector<ControlWord> words, ProgramMeta meta,
                 std::optional<std::int64_t> formula_cycles = std::nullopt);

    const std::vector<ControlWord>& words() const { return words_; }
    std::int64_t declared_cycles() const { return static_cast<std::int64_t>(words_.size()); }
    std::optional<std::int64_t> formula_cycles() const { return formula_cycles_; }
    /// Cycles spent beyond the formula budget (0 when none is declared).
    std::int64_t excess_cycles() const;
    const ProgramMeta& meta() const { return meta_; }

private:
    std::vector<ControlWord> words_;
    ProgramMeta meta_;
    std::optional<std::int64_t> formula_cycles_;
};

/// dst = a op b over n bits, two's complement wraparound. 2n cycles.
Microprogram prog_addsub(Row dst, Row src_a, Row src_b, int n, AluOp op);

/// dst[0, 2n) = multiplicand * multiplier (signed), Booth radix-2. 2n(n+1) cycles.
Microprogram prog_mult_booth(Row dst, Row multiplicand, Row multiplier, int n);

/// Sums the n-bit operand at `base` over q = 16 * 2^k PE columns into PE 0
/// of block 0, result width n + log2(q), written in place from `base`.
Microprogram prog_accumulate_row(Row base, int n, int q);

/// Inserts stall words so no row is read within `hazard_distance` cycles of
/// the write that produced it.
Microprogram schedule_for(const PipelineConfig& pipe, const Microprogram& prog);

struct Hazard {
    std::int64_t cycle;
    Row row;
};

/// Tracks the last write cycle of every register-file row.
class HazardTracker {
public:
    explicit HazardTracker(int hazard_distance = 0);

    /// The first offending read of `cw` issued at `cycle`, if any.
    std::optional<Hazard> check(const ControlWord& cw, std::int64_t cycle) const;
    /// Earliest cycle >= `cycle` at which `cw` may issue.
    std::int64_t earliest_issue(const ControlWord& cw, std::int64_t cycle) const;
    void record(const ControlWord& cw, std::int64_t cycle);
    void reset();

    int hazard_distance() const { return hazard_distance_; }

private:
    int hazard_distance_;
    std::vector<std::int64_t> last_write_;
};

std::optional<Hazard> find_hazard(const Microprogram& prog, int hazard_distance);

/// Text dump: one control word per line,
/// `cycle | rdA rdB wr | opmux encoder | flags | comment`.
std::string format_program(const Microprogram& prog);

// Closed-form budgets the builders target.
std::int64_t addsub_formula(int n);
std::int64_t mult_formula(int n);
std::int64_t accumulate_formula(int n, int q);

/// Throws InvalidQ unless q = 16 * 2^k.
void require_valid_q(int q);

}  // namespace picaso
