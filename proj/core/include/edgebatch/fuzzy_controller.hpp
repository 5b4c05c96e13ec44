#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "edgebatch/time.hpp"

namespace edgebatch {

class TrafficTracker;
class WorkloadMonitor;

namespace fuzzy {

enum class Label : int { NB = 0, NS = 1, ZO = 2, PS = 3, PB = 4 };

inline constexpr int kLabelCount = 5;
inline constexpr std::array<Label, kLabelCount> kLabels{Label::NB, Label::NS, Label::ZO, Label::PS,
                                                        Label::PB};

constexpr int index(Label l) noexcept { return static_cast<int>(l); }
constexpr Label mirror(Label l) noexcept { return static_cast<Label>(kLabelCount - 1 - index(l)); }
std::string_view name(Label l) noexcept;

// Degree of membership per label, indexed by index(Label).
using Degrees = std::array<double, kLabelCount>;

// Both controller inputs are confined to [-kInputRange, kInputRange].
inline constexpr double kInputRange = 0.20;

// Five symmetric triangles with 50% overlap. Inputs are clamped to the
// outermost centres, which turns the end triangles into shoulders.
struct MembershipPartition {
    std::array<double, kLabelCount> centers{-0.20, -0.10, 0.0, 0.10, 0.20};
    double half_width = 0.10;

    Degrees degrees(double x) const;
};

// Expert rules: rows are indexed by the workload-deviation label D,
// columns by the traffic-change label C. Entries are adjustment levels in
// [-2, 2].
class RuleTable {
public:
    using Grid = std::array<std::array<int, kLabelCount>, kLabelCount>;

    RuleTable() : RuleTable(expert()) {}
    explicit RuleTable(const Grid& levels);

    static RuleTable expert();

    // Five lines of five comma-separated integers; '#' comments and blank
    // lines are ignored. Throws ParseError.
    static RuleTable parse(std::string_view text);
    static RuleTable load(const std::filesystem::path& file);

    int at(Label c, Label d) const noexcept { return levels_[index(d)][index(c)]; }
    const Grid& grid() const noexcept { return levels_; }

    bool is_monotone() const noexcept;
    bool is_antisymmetric() const noexcept;
    std::string to_csv() const;

private:
    Grid levels_{};
};

Degrees fuzzify(double x, const MembershipPartition& partition = {});

// Fires every (C, D) rule with strength min(deg_C, deg_D), averages the rule
// levels weighted by strength and rounds half away from zero.
int infer(double traffic_change, double workload_deviation, const RuleTable& rules = RuleTable::expert(),
          const MembershipPartition& partition = {});

}  // namespace fuzzy

// Relative change (q_next - q_now) / q_now clamped to the input range; 0
// when q_now is not positive.
double compute_traffic_change(double q_next, double q_now);

// S - 1 clamped to the input range.
double compute_workload_deviation(double workload);

struct ControllerConfig {
    Millis block_interval{200};
    Millis min_interval{400};
    Millis max_interval{20000};
    Millis control_period{10000};
    bool prediction_enabled = true;
    int blocks_per_level = 1;  // interval step per output level, in blocks

    void validate() const;
    bool admissible(Millis interval) const noexcept;
};

// Everything one control tick saw and decided.
struct ControlDecision {
    Millis time{0};
    Millis previous_interval{0};
    Millis new_interval{0};
    double workload = 0.0;
    std::optional<double> rate_measured;
    std::optional<double> rate_predicted;
    double traffic_change = 0.0;
    double workload_deviation = 0.0;
    int level = 0;
    bool tracker_ready = false;
};

class FuzzyController {
public:
    explicit FuzzyController(ControllerConfig config, fuzzy::RuleTable rules = fuzzy::RuleTable::expert(),
                             fuzzy::MembershipPartition partition = {});

    // clamp(current + level * step, min, max); always a block multiple.
    Millis adjust_interval(Millis current, int level) const;

    // One regulation cycle: refresh S from the monitor, read the latest and
    // predicted rate from the tracker, infer the level and compute the next
    // interval. The caller applies new_interval to the batch timer.
    ControlDecision control_step(Millis now, Millis current_interval, const TrafficTracker& tracker,
                                 WorkloadMonitor& monitor) const;

    const ControllerConfig& config() const noexcept { return config_; }
    const fuzzy::RuleTable& rules() const noexcept { return rules_; }

private:
    ControllerConfig config_;
    fuzzy::RuleTable rules_;
    fuzzy::MembershipPartition partition_;
};

}  // namespace edgebatch
