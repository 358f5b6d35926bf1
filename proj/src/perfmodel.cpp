#include "picaso/perfmodel.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "picaso/errors.hpp"
#include "picaso/network.hpp"

namespace picaso::perf {

namespace {

constexpr std::array<std::string_view, 7> kArchNames{"SPAR2",    "PICASO_F", "CCB",  "COMEFA_D",
                                                     "COMEFA_A", "A_MOD",    "D_MOD"};

constexpr double kV7BramFmaxMhz = 543.77;
constexpr double kUsPlusBramFmaxMhz = 737.0;

int log2_q(int q) {
    if (q < 2 || !is_power_of_two(q)) {
        throw InvalidQ("q must be a power of two >= 2, got " + std::to_string(q));
    }
    return log2_exact(q);
}

ArchProfile custom(Arch a, double overhead, int reserved, AccumFormula accum, BoothSupport booth) {
    ArchProfile p;
    p.arch = a;
    p.clock_overhead = overhead;
    p.macs_per_bram = 144;
    p.bitline_depth = 256;
    p.reserved_wordlines_per_bit = reserved;
    p.mult = MultFormula::A;
    p.accum = accum;
    p.booth = booth;
    p.add_cycles_per_bit = 1;
    p.add_cycles_offset = 1;
    return p;
}

Family parse_family(const std::string& s) {
    if (s == "V7" || s == "Virtex7") return Family::Virtex7;
    if (s == "US+" || s == "UltraScalePlus") return Family::UltraScalePlus;
    throw std::invalid_argument("unknown device family '" + s + "'");
}

template <typename E>
E parse_enum(const std::string& s, std::initializer_list<E> values) {
    for (E v : values) {
        if (to_string(v) == s) return v;
    }
    throw std::invalid_argument("unknown value '" + s + "'");
}

}  // namespace

std::string_view to_string(Arch arch) { return kArchNames.at(static_cast<std::size_t>(arch)); }

std::optional<Arch> parse_arch(std::string_view text) {
    for (std::size_t i = 0; i < kArchNames.size(); ++i) {
        if (kArchNames[i] == text) return static_cast<Arch>(i);
    }
    return std::nullopt;
}

std::string_view to_string(MultFormula f) { return f == MultFormula::A ? "a" : "b"; }

std::string_view to_string(AccumFormula f) {
    switch (f) {
        case AccumFormula::C: return "c";
        case AccumFormula::D: return "d";
        case AccumFormula::E: return "e";
        case AccumFormula::NewsNetwork: return "news";
    }
    return "?";
}

std::string_view to_string(BoothSupport b) {
    switch (b) {
        case BoothSupport::No: return "No";
        case BoothSupport::Partial: return "Partial";
        case BoothSupport::Yes: return "Yes";
    }
    return "?";
}

std::string_view to_string(Family f) { return f == Family::Virtex7 ? "V7" : "US+"; }

Catalog Catalog::builtin() {
    Catalog c;

    ArchProfile picaso;
    picaso.arch = Arch::PicasoF;
    picaso.booth_nop_skip = true;

    ArchProfile spar2 = picaso;
    spar2.arch = Arch::Spar2;
    spar2.clock_overhead = 737.0 / 445.0 - 1.0;
    spar2.accum = AccumFormula::NewsNetwork;
    spar2.booth_nop_skip = false;

    c.archs_ = {
        spar2,
        picaso,
        custom(Arch::Ccb, 0.60, 8, AccumFormula::C, BoothSupport::No),
        custom(Arch::ComefaD, 0.25, 5, AccumFormula::C, BoothSupport::Partial),
        custom(Arch::ComefaA, 1.50, 5, AccumFormula::C, BoothSupport::Partial),
        custom(Arch::AMod, 1.50, 4, AccumFormula::E, BoothSupport::Yes),
        custom(Arch::DMod, 0.25, 4, AccumFormula::E, BoothSupport::Yes),
    };

    c.devices_ = {
        {"V7-a", "xc7vx330tffg-2", Family::Virtex7, 750, 272, kV7BramFmaxMhz},
        {"V7-b", "xc7vx485tffg-2", Family::Virtex7, 1030, 295, kV7BramFmaxMhz},
        {"V7-c", "xc7v2000tfhg-2", Family::Virtex7, 1292, 946, kV7BramFmaxMhz},
        {"V7-d", "xc7vx1140tflg-2", Family::Virtex7, 1880, 379, kV7BramFmaxMhz},
        {"US-a", "xcvu3p-ffvc-3", Family::UltraScalePlus, 720, 547, kUsPlusBramFmaxMhz},
        {"US-b", "xcvu23p-vsva-3", Family::UltraScalePlus, 2112, 488, kUsPlusBramFmaxMhz},
        {"US-c", "xcvu19p-fsvb-2", Family::UltraScalePlus, 2160, 1892, kUsPlusBramFmaxMhz},
        {"US-d", "xcvu29p-figd-3", Family::UltraScalePlus, 2688, 643, kUsPlusBramFmaxMhz},
        {"U55", "xcu55c", Family::UltraScalePlus, 2016, 0, kUsPlusBramFmaxMhz},
    };
    return c;
}

Catalog Catalog::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalogue " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Catalog c = builtin();
    c.apply_json(ss.str());
    return c;
}

void Catalog::apply_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);

    for (const auto& jd : doc.value("devices", nlohmann::json::array())) {
        const auto id = jd.at("id").get<std::string>();
        auto it = std::find_if(devices_.begin(), devices_.end(),
                               [&](const DeviceProfile& d) { return d.id == id; });
        DeviceProfile d;
        if (it != devices_.end()) {
            d = *it;
        } else {
            d.id = id;
            d.part = jd.at("part").get<std::string>();
            d.bram_count = jd.at("bram_count").get<int>();
            d.base_bram_freq_mhz = jd.at("base_bram_freq_mhz").get<double>();
        }
        if (jd.contains("part")) d.part = jd["part"].get<std::string>();
        if (jd.contains("family")) d.family = parse_family(jd["family"].get<std::string>());
        if (jd.contains("bram_count")) d.bram_count = jd["bram_count"].get<int>();
        if (jd.contains("lut_bram_ratio")) d.lut_bram_ratio = jd["lut_bram_ratio"].get<int>();
        if (jd.contains("base_bram_freq_mhz")) {
            d.base_bram_freq_mhz = jd["base_bram_freq_mhz"].get<double>();
        }
        if (d.bram_count < 0 || d.base_bram_freq_mhz <= 0.0) {
            throw std::invalid_argument("device " + id + " has invalid BRAM count or frequency");
        }
        if (it != devices_.end()) {
            *it = d;
        } else {
            devices_.push_back(d);
        }
    }

    for (const auto& jp : doc.value("profiles", nlohmann::json::array())) {
        const auto name = jp.at("name").get<std::string>();
        const auto arch = parse_arch(name);
        if (!arch) throw std::invalid_argument("unknown architecture profile '" + name + "'");
        auto& p = archs_[static_cast<std::size_t>(*arch)];
        if (jp.contains("clock_overhead")) p.clock_overhead = jp["clock_overhead"].get<double>();
        if (jp.contains("macs_per_bram")) p.macs_per_bram = jp["macs_per_bram"].get<int>();
        if (jp.contains("bitline_depth")) p.bitline_depth = jp["bitline_depth"].get<int>();
        if (jp.contains("reserved_wordlines_per_bit")) {
            p.reserved_wordlines_per_bit = jp["reserved_wordlines_per_bit"].get<int>();
        }
        if (jp.contains("mult_formula")) {
            p.mult = parse_enum(jp["mult_formula"].get<std::string>(),
                                {MultFormula::A, MultFormula::B});
        }
        if (jp.contains("accum_formula")) {
            p.accum = parse_enum(jp["accum_formula"].get<std::string>(),
                                 {AccumFormula::C, AccumFormula::D, AccumFormula::E,
                                  AccumFormula::NewsNetwork});
        }
        if (jp.contains("booth_support")) {
            p.booth = parse_enum(jp["booth_support"].get<std::string>(),
                                 {BoothSupport::No, BoothSupport::Partial, BoothSupport::Yes});
        }
        if (jp.contains("add_cycles_per_bit")) {
            p.add_cycles_per_bit = jp["add_cycles_per_bit"].get<int>();
        }
        if (jp.contains("add_cycles_offset")) {
            p.add_cycles_offset = jp["add_cycles_offset"].get<int>();
        }
        if (jp.contains("booth_nop_skip")) p.booth_nop_skip = jp["booth_nop_skip"].get<bool>();
    }
}

const ArchProfile& Catalog::arch(Arch a) const { return archs_.at(static_cast<std::size_t>(a)); }

const DeviceProfile& Catalog::device(std::string_view id_or_part) const {
    for (const auto& d : devices_) {
        if (d.id == id_or_part || d.part == id_or_part) return d;
    }
    throw UnknownDevice("unknown device '" + std::string(id_or_part) + "'");
}

std::int64_t mult_latency(const ArchProfile& arch, int n) {
    const std::int64_t nn = n;
    return arch.mult == MultFormula::A ? nn * nn + 3 * nn - 2 : 2 * nn * nn + 2 * nn;
}

std::int64_t accum_latency(const ArchProfile& arch, int q, int n) {
    const std::int64_t nn = n;
    switch (arch.accum) {
        case AccumFormula::C: {
            const int lq = log2_q(q);
            return (2 * nn + lq) * lq;
        }
        case AccumFormula::D: {
            if (q < 16 || q % 16 != 0 || !is_power_of_two(q / 16)) {
                throw InvalidQ("q must be 16·2^k, got " + std::to_string(q));
            }
            const int jumps = log2_exact(q / 16);
            return 15 + q / 16 + 4 * nn + (nn + 4) * jumps;
        }
        case AccumFormula::E:
            return (nn + 2) * log2_q(q);
        case AccumFormula::NewsNetwork:
            return (q - 1 + 2 * static_cast<std::int64_t>(log2_q(q))) * nn;
    }
    return 0;
}

double effective_freq_mhz(const ArchProfile& arch, const DeviceProfile& device) {
    return device.base_bram_freq_mhz / (1.0 + arch.clock_overhead);
}

std::int64_t mac_latency_cycles(const ArchProfile& arch, int n) {
    return mult_latency(arch, n) + accum_latency(arch, 16, n);
}

double mac_latency_time(const ArchProfile& arch, const DeviceProfile& device, int n) {
    return static_cast<double>(mac_latency_cycles(arch, n)) /
           (effective_freq_mhz(arch, device) * 1e6);
}

std::int64_t add_latency(const ArchProfile& arch, int n) {
    return static_cast<std::int64_t>(arch.add_cycles_per_bit) * n + arch.add_cycles_offset;
}

double mac_cycles_for_throughput(const ArchProfile& arch, int n, bool booth_effective,
                                 ThroughputModel model) {
    double mult = static_cast<double>(mult_latency(arch, n));
    if (booth_effective && arch.booth_nop_skip) mult *= 0.5;
    if (model == ThroughputModel::MultPlusAdd) mult += static_cast<double>(add_latency(arch, n));
    return mult;
}

double peak_throughput(const ArchProfile& arch, const DeviceProfile& device, int n,
                       bool booth_effective, ThroughputModel model) {
    const double units = static_cast<double>(arch.macs_per_bram) * device.bram_count;
    const double hz = effective_freq_mhz(arch, device) * 1e6;
    return units * hz / mac_cycles_for_throughput(arch, n, booth_effective, model);
}

double mem_efficiency(const ArchProfile& arch, int n) {
    const int reserved = arch.reserved_wordlines_per_bit * n;
    if (n < 1 || reserved >= arch.bitline_depth) {
        throw ReservationExceedsDepth(std::to_string(reserved) + " reserved wordlines leave no room in a " +
                                      std::to_string(arch.bitline_depth) + "-deep bitline");
    }
    return static_cast<double>(arch.bitline_depth - reserved) / arch.bitline_depth;
}

std::int64_t max_pes(const DeviceProfile& device) {
    return static_cast<std::int64_t>(kPesPerBram) * device.bram_count;
}

}  // namespace picaso::perf
