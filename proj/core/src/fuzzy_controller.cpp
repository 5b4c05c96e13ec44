#include "edgebatch/fuzzy_controller.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "edgebatch/errors.hpp"
#include "edgebatch/traffic_tracker.hpp"
#include "edgebatch/workload_monitor.hpp"

namespace edgebatch {

namespace fuzzy {

std::string_view name(Label l) noexcept {
    switch (l) {
        case Label::NB: return "NB";
        case Label::NS: return "NS";
        case Label::ZO: return "ZO";
        case Label::PS: return "PS";
        case Label::PB: return "PB";
    }
    return "??";
}

Degrees MembershipPartition::degrees(double x) const {
    x = std::clamp(x, centers.front(), centers.back());
    Degrees out{};
    for (int i = 0; i < kLabelCount; ++i) {
        out[i] = std::max(0.0, 1.0 - std::abs(x - centers[i]) / half_width);
    }
    return out;
}

RuleTable::RuleTable(const Grid& levels) : levels_(levels) {
    for (const auto& row : levels_) {
        for (int v : row) {
            if (v < -2 || v > 2) throw DomainError("rule level out of range [-2, 2]");
        }
    }
}

RuleTable RuleTable::expert() {
    //                  C:  NB  NS  ZO  PS  PB
    return RuleTable(Grid{{{-2, -1, -1, 0, 0},     // D = NB
                           {-1, -1, 0, 0, 0},      // D = NS
                           {-1, 0, 0, 0, +1},      // D = ZO
                           {0, 0, 0, +1, +1},      // D = PS
                           {0, 0, +1, +1, +2}}});  // D = PB
}

RuleTable RuleTable::parse(std::string_view text) {
    Grid grid{};
    int row = 0;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (row == kLabelCount) throw ParseError("rule table has more than 5 rows", line_no);
        std::istringstream cells(line);
        std::string cell;
        int col = 0;
        while (std::getline(cells, cell, ',')) {
            if (col == kLabelCount) throw ParseError("rule row has more than 5 entries", line_no);
            std::size_t used = 0;
            int value = 0;
            try {
                value = std::stoi(cell, &used);
            } catch (const std::exception&) {
                throw ParseError("rule entry '" + cell + "' is not an integer", line_no);
            }
            if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw ParseError("rule entry '" + cell + "' is not an integer", line_no);
            }
            if (value < -2 || value > 2) throw ParseError("rule entry outside [-2, 2]", line_no);
            grid[row][col++] = value;
        }
        if (col != kLabelCount) throw ParseError("rule row needs 5 entries", line_no);
        ++row;
    }
    if (row != kLabelCount) throw ParseError("rule table needs 5 rows, got " + std::to_string(row), 0);
    RuleTable table(grid);
    if (!table.is_monotone()) throw ParseError("rule table is not monotone along rows and columns", 0);
    if (!table.is_antisymmetric()) throw ParseError("rule table is not antisymmetric", 0);
    return table;
}

RuleTable RuleTable::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open rule table " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool RuleTable::is_monotone() const noexcept {
    for (int i = 0; i < kLabelCount; ++i) {
        for (int j = 1; j < kLabelCount; ++j) {
            if (levels_[i][j] < levels_[i][j - 1]) return false;
            if (levels_[j][i] < levels_[j - 1][i]) return false;
        }
    }
    return true;
}

bool RuleTable::is_antisymmetric() const noexcept {
    for (Label c : kLabels) {
        for (Label d : kLabels) {
            if (at(c, d) != -at(mirror(c), mirror(d))) return false;
        }
    }
    return true;
}

std::string RuleTable::to_csv() const {
    std::string out;
    for (const auto& row : levels_) {
        for (int j = 0; j < kLabelCount; ++j) {
            if (j) out += ',';
            out += std::to_string(row[j]);
        }
        out += '\n';
    }
    return out;
}

Degrees fuzzify(double x, const MembershipPartition& partition) { return partition.degrees(x); }

int infer(double traffic_change, double workload_deviation, const RuleTable& rules,
          const MembershipPartition& partition) {
    const Degrees c = partition.degrees(traffic_change);
    const Degrees d = partition.degrees(workload_deviation);
    double weight = 0.0;
    double weighted = 0.0;
    for (Label cl : kLabels) {
        for (Label dl : kLabels) {
            const double strength = std::min(c[index(cl)], d[index(dl)]);
            if (strength <= 0.0) continue;
            weight += strength;
            weighted += strength * rules.at(cl, dl);
        }
    }
    if (weight <= 0.0) return 0;
    return static_cast<int>(std::round(weighted / weight));
}

}  // namespace fuzzy

double compute_traffic_change(double q_next, double q_now) {
    if (!(q_now > 0.0)) {
        spdlog::debug("traffic change undefined for q_now = {}; using 0", q_now);
        return 0.0;
    }
    return std::clamp((q_next - q_now) / q_now, -fuzzy::kInputRange, fuzzy::kInputRange);
}

double compute_workload_deviation(double workload) {
    return std::clamp(workload - 1.0, -fuzzy::kInputRange, fuzzy::kInputRange);
}

void ControllerConfig::validate() const {
    if (block_interval <= Millis{0}) throw ConfigError("block interval must be > 0");
    if (min_interval <= Millis{0} || min_interval % block_interval != Millis{0}) {
        throw ConfigError("controller.min_interval_ms must be a positive multiple of the block interval");
    }
    if (max_interval % block_interval != Millis{0}) {
        throw ConfigError("controller.max_interval_ms must be a multiple of the block interval");
    }
    if (min_interval > max_interval) throw ConfigError("controller.min_interval_ms exceeds max_interval_ms");
    if (control_period <= Millis{0}) throw ConfigError("controller.control_period_ms must be > 0");
    if (blocks_per_level < 1) throw ConfigError("controller.blocks_per_level must be >= 1");
}

bool ControllerConfig::admissible(Millis interval) const noexcept {
    return interval >= min_interval && interval <= max_interval && interval % block_interval == Millis{0};
}

FuzzyController::FuzzyController(ControllerConfig config, fuzzy::RuleTable rules,
                                 fuzzy::MembershipPartition partition)
    : config_(config), rules_(std::move(rules)), partition_(partition) {
    config_.validate();
}

Millis FuzzyController::adjust_interval(Millis current, int level) const {
    const Millis step = config_.block_interval * config_.blocks_per_level;
    return std::clamp(current + step * level, config_.min_interval, config_.max_interval);
}

ControlDecision FuzzyController::control_step(Millis now, Millis current_interval,
                                              const TrafficTracker& tracker,
                                              WorkloadMonitor& monitor) const {
    ControlDecision out;
    out.time = now;
    out.previous_interval = current_interval;
    out.workload = monitor.update_estimate(now).value;

    std::optional<double> q_now;
    if (tracker.has_records()) q_now = tracker.get_latest_record().rate;
    out.rate_measured = q_now;
    out.tracker_ready = q_now.has_value() && tracker.trained();

    if (!config_.prediction_enabled) {
        out.rate_predicted = q_now;
        out.traffic_change = 0.0;
    } else if (out.tracker_ready) {
        out.rate_predicted = tracker.predict_rate(1);
        out.traffic_change = compute_traffic_change(*out.rate_predicted, *q_now);
    } else {
        spdlog::debug("control tick at {} ms: traffic model not ready, workload-only control", now.count());
        out.traffic_change = 0.0;
    }

    out.workload_deviation = compute_workload_deviation(out.workload);
    out.level = fuzzy::infer(out.traffic_change, out.workload_deviation, rules_, partition_);
    out.new_interval = adjust_interval(current_interval, out.level);
    return out;
}

}  // namespace edgebatch
