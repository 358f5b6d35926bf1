#include "picaso/microprogram.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <utility>

#include "picaso/errors.hpp"
#include "picaso/network.hpp"

namespace picaso {

namespace {

constexpr std::array<std::string_view, 4> kPipelineNames{"SINGLE_CYCLE", "RF_PIPE", "OP_PIPE",
                                                         "FULL_PIPE"};

// Accumulation overhead split: pipeline-fill words emitted ahead of the fold
// chain. The rest of the fixed budget is the fold widening bits (1+2+3+4)
// and the final write drain.
constexpr int kAccumFillCycles = 4;

void require_width(int n, int min_n) {
    if (n < min_n || n > 64) {
        throw std::invalid_argument("operand width " + std::to_string(n) + " outside [" +
                                    std::to_string(min_n) + ", 64]");
    }
}

void require_range(Row start, int len, const char* what) {
    if (static_cast<int>(start) + len > kRfDepth) {
        throw AddressOverflow(std::string(what) + " range [" + std::to_string(start) + ", " +
                              std::to_string(start + len) + ") exceeds " +
                              std::to_string(kRfDepth) + " wordlines");
    }
}

bool overlaps(Row a, int alen, Row b, int blen) {
    return a < b + blen && b < a + alen;
}

// A bit-serial stage reads `in_width` bits, writes `in_width + 1` bits, and
// sign-extends its top bit by holding the operand registers.
struct StreamStage {
    int in_width;
    OpMuxConf opmux;
    std::optional<int> net_level;
    std::string label;
};

// Lays stages back to back: each stage's first read shares a cycle with the
// previous stage's top-bit write. Appends to `words`.
void emit_stream_chain(std::vector<ControlWord>& words, Row base,
                       const std::vector<StreamStage>& stages) {
    std::size_t start = words.size();
    for (const auto& st : stages) {
        const std::size_t need = start + static_cast<std::size_t>(st.in_width) + 2;
        if (words.size() < need) words.resize(need);
        for (int k = 0; k < st.in_width; ++k) {
            auto& rd = words[start + k];
            rd.rd_a = static_cast<Row>(base + k);
        }
        for (int k = 0; k <= st.in_width; ++k) {
            auto& wr = words[start + k + 1];
            wr.wr = static_cast<Row>(base + k);
            wr.opmux = st.opmux;
            wr.encoder = EncoderConf::add();
            wr.carry_seed_en = (k == 0);
            wr.carry_en = true;
            wr.net_level = st.net_level;
            if (k == 0) wr.comment = st.label + " bit 0";
            if (k == st.in_width) wr.comment = st.label + " sign bit";
        }
        start += static_cast<std::size_t>(st.in_width) + 1;
    }
}

}  // namespace

PipelineConfig PipelineConfig::of(PipelineKind kind) {
    switch (kind) {
        case PipelineKind::SingleCycle: return single_cycle();
        case PipelineKind::RfPipe: return rf_pipe();
        case PipelineKind::OpPipe: return op_pipe();
        case PipelineKind::FullPipe: return full_pipe();
    }
    return full_pipe();
}

std::string_view to_string(PipelineKind kind) {
    return kPipelineNames.at(static_cast<std::size_t>(kind));
}

std::optional<PipelineKind> parse_pipeline(std::string_view text) {
    for (std::size_t i = 0; i < kPipelineNames.size(); ++i) {
        if (kPipelineNames[i] == text) return static_cast<PipelineKind>(i);
    }
    return std::nullopt;
}

std::string_view to_string(ProgramKind kind) {
    switch (kind) {
        case ProgramKind::Empty: return "empty";
        case ProgramKind::AddSub: return "addsub";
        case ProgramKind::MultBooth: return "mult";
        case ProgramKind::AccumulateRow: return "accumulate";
        case ProgramKind::Custom: return "custom";
    }
    return "custom";
}

Microprogram::Microprogram(std::vector<ControlWord> words, ProgramMeta meta,
                           std::optional<std::int64_t> formula_cycles)
    : words_(std::move(words)), meta_(meta), formula_cycles_(formula_cycles) {}

std::int64_t Microprogram::excess_cycles() const {
    return formula_cycles_ ? declared_cycles() - *formula_cycles_ : 0;
}

std::int64_t addsub_formula(int n) { return 2LL * n; }

std::int64_t mult_formula(int n) { return 2LL * n * n + 2LL * n; }

std::int64_t accumulate_formula(int n, int q) {
    require_valid_q(q);
    const int jumps = log2_exact(q / 16);
    return 15 + q / 16 + 4LL * n + static_cast<std::int64_t>(n + 4) * jumps;
}

void require_valid_q(int q) {
    if (q < 16 || q % 16 != 0 || !is_power_of_two(q / 16)) {
        throw InvalidQ("q must be 16·2^k, got " + std::to_string(q));
    }
}

Microprogram prog_addsub(Row dst, Row src_a, Row src_b, int n, AluOp op) {
    if (op != AluOp::Add && op != AluOp::Sub) {
        throw std::invalid_argument("prog_addsub expects ADD or SUB");
    }
    require_width(n, 1);
    require_range(dst, n, "destination");
    require_range(src_a, n, "operand A");
    require_range(src_b, n, "operand B");
    for (Row src : {src_a, src_b}) {
        if (src != dst && overlaps(dst, n, src, n)) {
            throw OverlapError("destination overlaps an operand with a different alignment");
        }
    }

    std::vector<ControlWord> words;
    words.reserve(2 * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        ControlWord rd;
        rd.rd_a = static_cast<Row>(src_a + k);
        rd.rd_b = static_cast<Row>(src_b + k);
        if (k == 0) rd.comment = "read bit 0";
        words.push_back(std::move(rd));

        ControlWord wr;
        wr.wr = static_cast<Row>(dst + k);
        wr.encoder = (op == AluOp::Add) ? EncoderConf::add() : EncoderConf::sub();
        wr.carry_seed_en = (k == 0);
        wr.carry_en = true;
        if (k == n - 1) wr.comment = "write msb";
        words.push_back(std::move(wr));
    }
    ProgramMeta meta{ProgramKind::AddSub, n, 0, op, dst, src_a, src_b, n};
    return Microprogram(std::move(words), meta, addsub_formula(n));
}

Microprogram prog_mult_booth(Row dst, Row multiplicand, Row multiplier, int n) {
    require_width(n, 2);
    require_range(dst, 2 * n, "product");
    require_range(multiplicand, n, "multiplicand");
    require_range(multiplier, n, "multiplier");
    if (overlaps(dst, 2 * n, multiplicand, n) || overlaps(dst, 2 * n, multiplier, n)) {
        throw OverlapError("product range overlaps an operand");
    }

    std::vector<ControlWord> words;
    words.reserve(static_cast<std::size_t>(mult_formula(n)));
    for (int i = 0; i < n; ++i) {
        const bool first = (i == 0);
        // Partial-product window for this iteration starts at dst + i.
        const Row window = static_cast<Row>(dst + i);
        const OpMuxConf mux = first ? OpMuxConf::ZeroOpB : OpMuxConf::AOpB;

        ControlWord recode_rd;
        if (!first) recode_rd.rd_a = static_cast<Row>(multiplier + i - 1);
        recode_rd.rd_b = static_cast<Row>(multiplier + i);
        recode_rd.comment = "iter " + std::to_string(i) + " read multiplier bits";
        words.push_back(std::move(recode_rd));

        ControlWord latch;
        latch.opmux = mux;
        latch.encoder = EncoderConf::booth();
        latch.op_latch_en = true;
        if (!first) latch.rd_a = window;
        latch.rd_b = multiplicand;
        latch.comment = "iter " + std::to_string(i) + " booth recode";
        words.push_back(std::move(latch));

        for (int k = 0; k <= n; ++k) {
            ControlWord wr;
            wr.wr = static_cast<Row>(window + k);
            wr.opmux = mux;
            wr.use_latched_op = true;
            wr.carry_seed_en = (k == 0);
            wr.carry_en = true;
            if (k == n) wr.comment = "sign bit";
            words.push_back(std::move(wr));
            if (k + 1 < n) {
                ControlWord rd;
                if (!first) rd.rd_a = static_cast<Row>(window + k + 1);
                rd.rd_b = static_cast<Row>(multiplicand + k + 1);
                words.push_back(std::move(rd));
            }
            // No read before the sign bit: it reuses the registered top bits.
        }
    }
    ProgramMeta meta{ProgramKind::MultBooth, n, 0, AluOp::Add, dst, multiplicand, multiplier, 2 * n};
    Microprogram prog(std::move(words), meta, mult_formula(n));
    return schedule_for(PipelineConfig::full_pipe(), prog);
}

Microprogram prog_accumulate_row(Row base, int n, int q) {
    require_valid_q(q);
    require_width(n, 2);
    const int jumps = log2_exact(q / 16);
    const int result_width = n + 4 + jumps;
    require_range(base, result_width, "accumulator");

    std::vector<ControlWord> words;
    for (int i = 0; i < kAccumFillCycles; ++i) words.push_back(nop_word("pipeline fill"));
    for (int b = 0; b < q / 16; ++b) {
        words.push_back(nop_word("dispatch block " + std::to_string(b)));
    }

    std::vector<StreamStage> stages;
    constexpr std::array<OpMuxConf, 4> folds{OpMuxConf::AFold1, OpMuxConf::AFold2,
                                             OpMuxConf::AFold3, OpMuxConf::AFold4};
    for (int f = 0; f < 4; ++f) {
        stages.push_back({n + f, folds[f], std::nullopt, "fold " + std::to_string(f + 1)});
    }
    for (int j = 0; j < jumps; ++j) {
        stages.push_back({n + 4 + j, OpMuxConf::AOpNet, j, "net level " + std::to_string(j)});
    }
    emit_stream_chain(words, base, stages);

    ProgramMeta meta{ProgramKind::AccumulateRow, n, q, AluOp::Add, base, base, base, result_width};
    Microprogram prog(std::move(words), meta, accumulate_formula(n, q));
    return schedule_for(PipelineConfig::full_pipe(), prog);
}

HazardTracker::HazardTracker(int hazard_distance)
    : hazard_distance_(hazard_distance), last_write_(kRfDepth, -1) {
    if (hazard_distance < 0) throw std::invalid_argument("negative hazard distance");
}

std::optional<Hazard> HazardTracker::check(const ControlWord& cw, std::int64_t cycle) const {
    if (hazard_distance_ == 0) return std::nullopt;
    for (const auto& rd : {cw.rd_a, cw.rd_b}) {
        if (!rd || *rd >= kRfDepth) continue;
        if (cw.wr && *cw.wr == *rd) return Hazard{cycle, *rd};
        const std::int64_t w = last_write_[*rd];
        if (w >= 0 && cycle - w <= hazard_distance_) return Hazard{cycle, *rd};
    }
    return std::nullopt;
}

std::int64_t HazardTracker::earliest_issue(const ControlWord& cw, std::int64_t cycle) const {
    std::int64_t t = cycle;
    if (hazard_distance_ == 0) return t;
    for (const auto& rd : {cw.rd_a, cw.rd_b}) {
        if (!rd || *rd >= kRfDepth) continue;
        const std::int64_t w = last_write_[*rd];
        if (w >= 0) t = std::max(t, w + hazard_distance_ + 1);
    }
    return t;
}

void HazardTracker::record(const ControlWord& cw, std::int64_t cycle) {
    if (cw.wr && *cw.wr < kRfDepth) last_write_[*cw.wr] = cycle;
}

void HazardTracker::reset() { std::fill(last_write_.begin(), last_write_.end(), -1); }

std::optional<Hazard> find_hazard(const Microprogram& prog, int hazard_distance) {
    HazardTracker tracker(hazard_distance);
    std::int64_t cycle = 0;
    for (const auto& cw : prog.words()) {
        if (auto h = tracker.check(cw, cycle)) return h;
        tracker.record(cw, cycle);
        ++cycle;
    }
    return std::nullopt;
}

Microprogram schedule_for(const PipelineConfig& pipe, const Microprogram& prog) {
    HazardTracker tracker(pipe.hazard_distance);
    std::vector<ControlWord> out;
    out.reserve(prog.words().size());
    for (const auto& cw : prog.words()) {
        if (pipe.hazard_distance > 0 && cw.wr && (cw.rd_a == cw.wr || cw.rd_b == cw.wr)) {
            throw UnschedulableHazard("control word reads and writes row " +
                                      std::to_string(*cw.wr) +
                                      " in one cycle; no stall can separate them");
        }
        const auto now = static_cast<std::int64_t>(out.size());
        const std::int64_t issue = tracker.earliest_issue(cw, now);
        for (std::int64_t t = now; t < issue; ++t) out.push_back(nop_word("stall"));
        tracker.record(cw, static_cast<std::int64_t>(out.size()));
        out.push_back(cw);
    }
    return Microprogram(std::move(out), prog.meta(), prog.formula_cycles());
}

std::string format_program(const Microprogram& prog) {
    std::ostringstream os;
    const auto& m = prog.meta();
    os << "# kind=" << to_string(m.kind) << " n=" << m.n << " q=" << m.q
       << " declared=" << prog.declared_cycles();
    if (prog.formula_cycles()) os << " formula=" << *prog.formula_cycles();
    os << "\n# cycle | rdA  rdB  wr   | opmux     enc | flags | comment\n";

    auto row = [](const std::optional<Row>& r) {
        char buf[8];
        if (r) {
            std::snprintf(buf, sizeof buf, "%4u", static_cast<unsigned>(*r));
        } else {
            std::snprintf(buf, sizeof buf, "%4s", "-");
        }
        return std::string(buf);
    };

    std::int64_t cycle = 0;
    for (const auto& cw : prog.words()) {
        std::string flags;
        if (cw.op_latch_en) flags += 'L';
        if (cw.use_latched_op) flags += 'H';
        if (cw.carry_seed_en) flags += 'S';
        if (cw.carry_en) flags += 'C';
        if (cw.net_level) flags += "N" + std::to_string(*cw.net_level);
        if (flags.empty()) flags = "-";

        const unsigned code = cw.encoder.code();
        const char enc[4] = {char('0' + ((code >> 2) & 1U)), char('0' + ((code >> 1) & 1U)),
                             char('0' + (code & 1U)), '\0'};
        char line[128];
        std::snprintf(line, sizeof line, "%7lld | %s %s %s | %-9s %s | %-5s | ",
                      static_cast<long long>(cycle), row(cw.rd_a).c_str(), row(cw.rd_b).c_str(),
                      row(cw.wr).c_str(), std::string(to_string(cw.opmux)).c_str(), enc,
                      flags.c_str());
        os << line << cw.comment << '\n';
        ++cycle;
    }
    return os.str();
}

}  // namespace picaso
