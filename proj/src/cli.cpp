#include "picaso/cli.hpp"

#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "picaso/errors.hpp"
#include "picaso/network.hpp"

namespace picaso {

namespace {

constexpr int kMaxDemoWidth = 28;  // keeps 2n + log2(q) within int64

void check_width(int n) {
    if (n < 2 || n > kMaxDemoWidth) {
        throw std::invalid_argument("n must be in [2, " + std::to_string(kMaxDemoWidth) + "], got " +
                                    std::to_string(n));
    }
}

std::vector<std::int64_t> slice16(const std::vector<std::int64_t>& v, int block) {
    return {v.begin() + 16 * block, v.begin() + 16 * (block + 1)};
}

}  // namespace

OperandLayout MacLayout::sum(int q) const {
    return {static_cast<Row>(2 * n), 2 * n + log2_exact(q), true};
}

std::vector<std::int64_t> random_operands(int count, int n, std::uint64_t seed,
                                          std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);
    std::vector<std::int64_t> out(static_cast<std::size_t>(count));
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    const std::uint64_t sign = std::uint64_t{1} << (n - 1);
    for (auto& v : out) {
        const std::uint64_t u = rng() & mask;
        v = (u & sign) ? static_cast<std::int64_t>(u) - static_cast<std::int64_t>(mask) - 1
                       : static_cast<std::int64_t>(u);
    }
    return out;
}

MacResult run_mac(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, int n,
                  PipelineConfig pipe, PimArray* final_state) {
    check_width(n);
    const int q = static_cast<int>(a.size());
    require_valid_q(q);
    if (b.size() != a.size()) throw std::invalid_argument("operand vectors differ in length");

    const MacLayout lay{n};
    PimArray arr(1, q / 16, pipe);
    for (int c = 0; c < q / 16; ++c) {
        arr.load_corner_turned({0, c}, slice16(a, c), lay.a());
        arr.load_corner_turned({0, c}, slice16(b, c), lay.b());
    }

    MacResult r;
    r.n = n;
    r.q = q;
    r.a = a;
    r.b = b;
    const auto mult = schedule_for(pipe, prog_mult_booth(lay.product().base, lay.a().base, lay.b().base, n));
    const auto accum = schedule_for(pipe, prog_accumulate_row(lay.product().base, 2 * n, q));

    r.mult_cycles = arr.run(mult);
    r.products_match = true;
    for (int c = 0; c < q / 16; ++c) {
        const auto p = arr.read_values({0, c}, lay.product());
        for (int lane = 0; lane < 16; ++lane) {
            const auto i = static_cast<std::size_t>(16 * c + lane);
            r.lane_products.push_back(p[lane]);
            r.products_match = r.products_match && p[lane] == a[i] * b[i];
        }
    }
    r.accum_cycles = arr.run(accum);
    r.array_sum = arr.read_value({0, 0}, 0, lay.sum(q));
    for (int i = 0; i < q; ++i) r.oracle_sum += a[i] * b[i];

    r.mult_formula = mult_formula(n);
    r.accum_formula_n = accumulate_formula(n, q);
    r.accum_formula_2n = accumulate_formula(2 * n, q);
    if (final_state) *final_state = arr;
    return r;
}

GemvResult run_gemv(const std::vector<std::vector<std::int64_t>>& w,
                    const std::vector<std::int64_t>& x, int n, PipelineConfig pipe,
                    PimArray* final_state) {
    check_width(n);
    const int q = static_cast<int>(x.size());
    require_valid_q(q);
    const int m = static_cast<int>(w.size());
    if (m < 1) throw std::invalid_argument("matrix needs at least one row");
    for (const auto& row : w) {
        if (row.size() != x.size()) throw std::invalid_argument("matrix row length differs from q");
    }

    const MacLayout lay{n};
    PimArray arr(m, q / 16, pipe);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < q / 16; ++c) {
            arr.load_corner_turned({r, c}, slice16(x, c), lay.a());
            arr.load_corner_turned({r, c}, slice16(w[r], c), lay.b());
        }
    }
    GemvResult g;
    g.n = n;
    g.q = q;
    g.cycles = arr.run(schedule_for(pipe, prog_mult_booth(lay.product().base, lay.a().base,
                                                       lay.b().base, n)));
    g.cycles += arr.run(schedule_for(pipe, prog_accumulate_row(lay.product().base, 2 * n, q)));
    for (int r = 0; r < m; ++r) {
        g.y.push_back(arr.read_value({r, 0}, 0, lay.sum(q)));
        std::int64_t acc = 0;
        for (int i = 0; i < q; ++i) acc += w[r][i] * x[i];
        g.oracle.push_back(acc);
    }
    if (final_state) *final_state = arr;
    return g;
}

namespace {

int simulate_mac(const SimulateOptions& opt, std::ostream& out, PimArray* state) {
    const auto a = random_operands(opt.q, opt.n, opt.seed, 0);
    const auto b = random_operands(opt.q, opt.n, opt.seed, 1);
    const auto r = run_mac(a, b, opt.n, PipelineConfig::of(opt.pipeline), state);
    if (state) return r.match() ? kExitOk : kExitVerifyFailed;

    if (opt.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["workload"] = "mac";
        j["n"] = r.n;
        j["q"] = r.q;
        j["seed"] = opt.seed;
        j["pipeline"] = std::string(to_string(opt.pipeline));
        j["a"] = r.a;
        j["b"] = r.b;
        j["lane_products"] = r.lane_products;
        j["array_result"] = r.array_sum;
        j["oracle_result"] = r.oracle_sum;
        j["verdict"] = r.match() ? "MATCH" : "MISMATCH";
        j["cycles"] = {{"mult", r.mult_cycles},
                       {"mult_formula", r.mult_formula},
                       {"accum", r.accum_cycles},
                       {"accum_width", 2 * r.n},
                       {"accum_formula", r.accum_formula_2n},
                       {"accum_formula_at_n", r.accum_formula_n}};
        out << j.dump(2) << '\n';
    } else {
        out << "workload mac n=" << r.n << " q=" << r.q << " seed=" << opt.seed
            << " pipeline=" << to_string(opt.pipeline) << '\n';
        out << "lane,a,b,product,expected\n";
        for (int i = 0; i < r.q; ++i) {
            out << i << ',' << r.a[i] << ',' << r.b[i] << ',' << r.lane_products[i] << ','
                << r.a[i] * r.b[i] << '\n';
        }
        out << "array result: " << r.array_sum << '\n';
        out << "host oracle:  " << r.oracle_sum << '\n';
        out << "verdict: " << (r.match() ? "MATCH" : "MISMATCH") << '\n';
        out << "cycles: mult " << r.mult_cycles << " (formula " << r.mult_formula << "), accum "
            << r.accum_cycles << " at width " << 2 * r.n << " (formula " << r.accum_formula_2n
            << "; at width " << r.n << ": " << r.accum_formula_n << ")\n";
    }
    return r.match() ? kExitOk : kExitVerifyFailed;
}

int simulate_gemv(const SimulateOptions& opt, std::ostream& out, PimArray* state) {
    if (opt.rows < 1 || opt.rows > 1024) throw std::invalid_argument("rows must be in [1, 1024]");
    const auto x = random_operands(opt.q, opt.n, opt.seed, 0);
    std::vector<std::vector<std::int64_t>> w;
    for (int r = 0; r < opt.rows; ++r) {
        w.push_back(random_operands(opt.q, opt.n, opt.seed, 1 + static_cast<std::uint64_t>(r)));
    }
    const auto g = run_gemv(w, x, opt.n, PipelineConfig::of(opt.pipeline), state);
    if (state) return g.match() ? kExitOk : kExitVerifyFailed;

    if (opt.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["workload"] = "gemv";
        j["n"] = g.n;
        j["q"] = g.q;
        j["rows"] = opt.rows;
        j["seed"] = opt.seed;
        j["pipeline"] = std::string(to_string(opt.pipeline));
        j["x"] = x;
        j["w"] = w;
        j["y"] = g.y;
        j["oracle"] = g.oracle;
        j["verdict"] = g.match() ? "MATCH" : "MISMATCH";
        j["cycles"] = g.cycles;
        out << j.dump(2) << '\n';
    } else {
        out << "workload gemv n=" << g.n << " q=" << g.q << " rows=" << opt.rows
            << " seed=" << opt.seed << " pipeline=" << to_string(opt.pipeline) << '\n';
        out << "row,y,expected\n";
        for (std::size_t r = 0; r < g.y.size(); ++r) {
            out << r << ',' << g.y[r] << ',' << g.oracle[r] << '\n';
        }
        out << "verdict: " << (g.match() ? "MATCH" : "MISMATCH") << '\n';
        out << "cycles: " << g.cycles << " (mult " << mult_formula(g.n) << " + accum "
            << g.cycles - mult_formula(g.n) << ", all rows in lock-step)\n";
    }
    return g.match() ? kExitOk : kExitVerifyFailed;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

int dispatch_workload(const SimulateOptions& opt, std::ostream& out, PimArray* state) {
    check_width(opt.n);
    require_valid_q(opt.q);
    if (opt.workload == "mac") return simulate_mac(opt, out, state);
    if (opt.workload == "gemv") return simulate_gemv(opt, out, state);
    throw UnknownKind("unknown workload '" + opt.workload + "' (mac|gemv)");
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const int rc = dispatch_workload(opt, out, nullptr);
        if (rc == kExitVerifyFailed) err << "verification failed: simulator disagrees with host\n";
        return rc;
    });
}

int cmd_dump_state(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        PimArray state(1, 1);
        const int rc = dispatch_workload(opt, out, &state);
        out << state.dump_state_json() << '\n';
        if (rc == kExitVerifyFailed) err << "verification failed: simulator disagrees with host\n";
        return rc;
    });
}

int cmd_report(const ReportSpec& spec, const perf::Catalog& catalog, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        out << render_report(spec, catalog);
        return kExitOk;
    });
}

int cmd_assemble(const AssembleOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opt.n < 1) throw std::invalid_argument("n must be positive");
        const auto n = static_cast<Row>(opt.n);
        Microprogram prog;
        if (opt.op == "add" || opt.op == "sub") {
            prog = prog_addsub(static_cast<Row>(2 * n), 0, n, opt.n,
                               opt.op == "add" ? AluOp::Add : AluOp::Sub);
        } else if (opt.op == "mult") {
            prog = prog_mult_booth(static_cast<Row>(2 * n), 0, n, opt.n);
        } else if (opt.op == "accum") {
            prog = prog_accumulate_row(0, opt.n, opt.q);
        } else {
            throw UnknownKind("unknown op '" + opt.op + "' (add|sub|mult|accum)");
        }
        out << format_program(schedule_for(PipelineConfig::of(opt.pipeline), prog));
        return kExitOk;
    });
}

}  // namespace picaso
