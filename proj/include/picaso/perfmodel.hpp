#pragma once

// Closed-form latency, throughput, memory-efficiency and scalability models
// for PiCaSO, the SPAR-2 overlay and the custom compute-in-BRAM designs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace picaso::perf {

enum class Arch : std::uint8_t { Spar2, PicasoF, Ccb, ComefaD, ComefaA, AMod, DMod };

/// (a) N^2+3N-2 for read-modify-write custom designs; (b) 2N^2+2N bit-serial Booth.
enum class MultFormula : std::uint8_t { A, B };

/// (c) (2N+log2 q) log2 q; (d) 15+q/16+4N+(N+4)log2(q/16); (e) (N+2) log2 q;
/// NewsNetwork: (q-1+2 log2 q) N.
enum class AccumFormula : std::uint8_t { C, D, E, NewsNetwork };

enum class BoothSupport : std::uint8_t { No, Partial, Yes };

enum class Family : std::uint8_t { Virtex7, UltraScalePlus };

std::string_view to_string(Arch arch);
std::optional<Arch> parse_arch(std::string_view text);
std::string_view to_string(MultFormula f);
std::string_view to_string(AccumFormula f);
std::string_view to_string(BoothSupport b);
std::string_view to_string(Family f);

struct ArchProfile {
    Arch arch = Arch::PicasoF;
    double clock_overhead = 0.0;      // fractional clock-period stretch vs. BRAM fmax
    int macs_per_bram = 36;
    int bitline_depth = 1024;
    int reserved_wordlines_per_bit = 4;
    MultFormula mult = MultFormula::B;
    AccumFormula accum = AccumFormula::D;
    BoothSupport booth = BoothSupport::Yes;
    // Element-wise add cost: add_cycles_per_bit * n + add_cycles_offset.
    int add_cycles_per_bit = 2;
    int add_cycles_offset = 0;
    // Whether the Booth NOP-skip estimate applies (halves the mult term).
    bool booth_nop_skip = false;

    friend bool operator==(const ArchProfile&, const ArchProfile&) = default;
};

struct DeviceProfile {
    std::string id;
    std::string part;
    Family family = Family::Virtex7;
    int bram_count = 0;           // 36Kb blocks
    int lut_bram_ratio = 0;       // 0 when unknown
    double base_bram_freq_mhz = 0.0;

    friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

/// PEs a 36Kb BRAM hosts in the overlay: two 18Kb halves, 16 lanes each.
inline constexpr int kPesPerBram = 32;

class Catalog {
public:
    /// Architectures and devices with the published parameters.
    static Catalog builtin();
    /// Built-ins overridden/extended by a JSON catalogue file.
    static Catalog from_file(const std::string& path);
    /// Applies a JSON catalogue document on top of this catalogue.
    void apply_json(const std::string& text);

    const std::vector<ArchProfile>& archs() const { return archs_; }
    const std::vector<DeviceProfile>& devices() const { return devices_; }

    const ArchProfile& arch(Arch a) const;
    /// Lookup by short id (e.g. "US-d", "U55") or part name. Throws UnknownDevice.
    const DeviceProfile& device(std::string_view id_or_part) const;

private:
    std::vector<ArchProfile> archs_;
    std::vector<DeviceProfile> devices_;
};

std::int64_t mult_latency(const ArchProfile& arch, int n);

/// Throws InvalidQ when q does not suit the profile's formula.
std::int64_t accum_latency(const ArchProfile& arch, int q, int n);

double effective_freq_mhz(const ArchProfile& arch, const DeviceProfile& device);

/// Cycles for 16 parallel multiplies followed by accumulation of the products.
std::int64_t mac_latency_cycles(const ArchProfile& arch, int n);

/// Wall-clock time of `mac_latency_cycles` in seconds.
double mac_latency_time(const ArchProfile& arch, const DeviceProfile& device, int n);

std::int64_t add_latency(const ArchProfile& arch, int n);

enum class ThroughputModel : std::uint8_t {
    MultOnly,     // peak rate bound by the multiply
    MultPlusAdd,  // multiply followed by an element-wise accumulate add
};

double mac_cycles_for_throughput(const ArchProfile& arch, int n, bool booth_effective,
                                 ThroughputModel model = ThroughputModel::MultOnly);

/// Peak MAC/s over every BRAM of the device.
double peak_throughput(const ArchProfile& arch, const DeviceProfile& device, int n,
                       bool booth_effective, ThroughputModel model = ThroughputModel::MultOnly);

/// Fraction of the bitline left for weights. Throws ReservationExceedsDepth.
double mem_efficiency(const ArchProfile& arch, int n);

std::int64_t max_pes(const DeviceProfile& device);

}  // namespace picaso::perf
