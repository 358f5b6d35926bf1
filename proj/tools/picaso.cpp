// picaso: simulate, report, assemble and dump-state front end.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "picaso/cli.hpp"
#include "picaso/errors.hpp"

namespace {

struct Common {
    std::string out_path;
    std::string format = "csv";
    std::string pipeline = "FULL_PIPE";
};

int emit(const Common& common, const std::string& text) {
    if (common.out_path.empty()) {
        std::cout << text;
        return picaso::kExitOk;
    }
    std::ofstream f(common.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << common.out_path << '\n';
        return picaso::kExitUsage;
    }
    f << text;
    return picaso::kExitOk;
}

picaso::PipelineKind pipeline_or_throw(const std::string& name) {
    if (auto k = picaso::parse_pipeline(name)) return *k;
    throw CLI::ValidationError("--pipeline", "unknown pipeline '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bit-serial PIM overlay simulator and performance comparator"};
    app.require_subcommand(1);

    Common common;
    picaso::SimulateOptions sim;
    std::string sim_format = "text";

    auto* simulate = app.add_subcommand("simulate", "Run a seeded MAC or GEMV workload");
    auto* dump = app.add_subcommand("dump-state", "Run a seeded workload and print the array state");
    for (auto* cmd : {simulate, dump}) {
        cmd->add_option("workload", sim.workload, "mac | gemv")->capture_default_str();
        cmd->add_option("--n", sim.n, "Operand width in bits")->capture_default_str();
        cmd->add_option("--q", sim.q, "Columns (PEs) per reduction, 16*2^k")->capture_default_str();
        cmd->add_option("--rows", sim.rows, "Matrix rows for gemv")->capture_default_str();
        cmd->add_option("--seed", sim.seed, "Operand RNG seed")->capture_default_str();
        cmd->add_option("--pipeline", common.pipeline, "SINGLE_CYCLE | RF_PIPE | OP_PIPE | FULL_PIPE")
            ->capture_default_str();
        cmd->add_option("--out", common.out_path, "Write to a file instead of stdout");
    }
    simulate->add_option("--format", sim_format, "text | json")->capture_default_str();

    picaso::ReportSpec spec;
    std::string kind = "latency";
    std::string device = "U55";
    std::string catalog_path;
    std::string model = "mult-only";
    std::vector<int> precisions;
    std::vector<std::string> archs;
    auto* report = app.add_subcommand("report", "Emit a comparison table");
    report->add_option("--kind", kind, "latency | throughput | memeff | scalability | cycle-formulas")
        ->capture_default_str();
    report->add_option("--n", precisions, "Precisions, comma separated (default 4,8,16)")
        ->delimiter(',');
    report->add_option("--q", spec.q, "Columns for cycle formulas")->capture_default_str();
    report->add_option("--device", device, "Device id or part name")->capture_default_str();
    report->add_option("--arch", archs, "Restrict to architectures (comma separated)")->delimiter(',');
    report->add_option("--format", common.format, "csv | json")->capture_default_str();
    report->add_flag("--booth-effective", spec.booth_effective,
                     "Halve PiCaSO's multiply for Booth NOP skipping");
    report->add_flag("--percent", spec.percent, "Efficiency as percent");
    report->add_option("--throughput-model", model, "mult-only | mult+add")->capture_default_str();
    report->add_option("--catalog", catalog_path, "JSON device/profile catalogue overrides");
    report->add_option("--out", common.out_path, "Write to a file instead of stdout");

    picaso::AssembleOptions asmopt;
    auto* assemble = app.add_subcommand("assemble", "Print a microprogram as text");
    assemble->add_option("--op", asmopt.op, "add | sub | mult | accum")->capture_default_str();
    assemble->add_option("--n", asmopt.n, "Operand width in bits")->capture_default_str();
    assemble->add_option("--q", asmopt.q, "Columns for accum")->capture_default_str();
    assemble->add_option("--pipeline", common.pipeline, "Target pipeline")->capture_default_str();
    assemble->add_option("--out", common.out_path, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? picaso::kExitOk : picaso::kExitUsage;
    }

    std::ostringstream out;
    int rc = picaso::kExitOk;
    try {
        if (simulate->parsed() || dump->parsed()) {
            sim.pipeline = pipeline_or_throw(common.pipeline);
            if (sim_format != "text" && sim_format != "json") {
                throw CLI::ValidationError("--format", "expected text or json");
            }
            sim.format = sim_format == "json" ? picaso::OutputFormat::Json : picaso::OutputFormat::Csv;
            rc = simulate->parsed() ? picaso::cmd_simulate(sim, out, std::cerr)
                                    : picaso::cmd_dump_state(sim, out, std::cerr);
        } else if (report->parsed()) {
            spec.kind = picaso::parse_report_kind(kind);
            spec.device = device;
            spec.format = picaso::parse_format(common.format);
            if (!precisions.empty()) spec.precisions = precisions;
            if (model == "mult-only") {
                spec.throughput_model = picaso::perf::ThroughputModel::MultOnly;
            } else if (model == "mult+add") {
                spec.throughput_model = picaso::perf::ThroughputModel::MultPlusAdd;
            } else {
                throw CLI::ValidationError("--throughput-model", "expected mult-only or mult+add");
            }
            for (const auto& a : archs) {
                const auto parsed = picaso::perf::parse_arch(a);
                if (!parsed) throw picaso::UnknownKind("unknown architecture '" + a + "'");
                spec.archs.push_back(*parsed);
            }
            const auto catalog = catalog_path.empty() ? picaso::perf::Catalog::builtin()
                                                      : picaso::perf::Catalog::from_file(catalog_path);
            rc = picaso::cmd_report(spec, catalog, out, std::cerr);
        } else if (assemble->parsed()) {
            asmopt.pipeline = pipeline_or_throw(common.pipeline);
            rc = picaso::cmd_assemble(asmopt, out, std::cerr);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return picaso::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return picaso::kExitUsage;
    }

    if (rc == picaso::kExitUsage) return rc;
    const int wrc = emit(common, out.str());
    return wrc != picaso::kExitOk ? wrc : rc;
}
