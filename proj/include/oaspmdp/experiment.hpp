#pragma once

#include "oaspmdp/agent.hpp"
#include "oaspmdp/gridworld.hpp"
#include "oaspmdp/oasp_agent.hpp"
#include "oaspmdp/qlearn.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oasp {

enum class AgentKind { baseline, oasp };

std::string_view to_string(AgentKind k);
std::optional<AgentKind> agent_kind_from_string(std::string_view s);

struct EpisodeRecord {
    int episode = 0;
    AgentKind agent = AgentKind::baseline;
    double rmsd = 0.0;
    double return_ = 0.0;
    int steps = 0;
    std::size_t pair_count = 0;
};

/// Root-mean-square difference over the union of both key sets, absent
/// entries reading 0. Zero when both tables are empty.
double rmsd(const QTable& prev, const QTable& curr);

/// Phase plan of a scenario. Wall layouts are drawn per trial, so the
/// concrete Schedule is built from this plan and the trial seed.
struct ScenarioSpec {
    std::string name = "walls";
    int width = 10;
    int height = 10;
    int episodes = 3000;
    int trials = 30;
    LearnParams params;
    std::vector<int> change_episodes{1000, 2000};
    /// One entry per phase (change_episodes.size() + 1).
    std::vector<double> wall_ratios{0.0, 0.10, 0.25};
    std::vector<double> p_intended{0.9, 0.9, 0.9};
    /// Draw a fresh layout at every phase. Otherwise a layout is redrawn only
    /// when the wall ratio differs from the previous phase.
    bool resample_walls = true;

    /// Wall ratios 0 -> 10% -> 25%, 90/5 dynamics.
    static ScenarioSpec walls_test();
    /// Fixed 25% layout, dynamics 50/25 -> 75/12.5 -> 90/5.
    static ScenarioSpec probs_test();

    /// Throws std::invalid_argument on inconsistent fields.
    void validate() const;
};

/// Concrete schedule for one trial; identical for both agents.
Schedule build_schedule(const ScenarioSpec& spec, std::uint64_t trial_seed);

struct TrialResult {
    std::uint64_t seed = 0;
    /// Episode-major; within an episode the baseline record comes first.
    std::vector<EpisodeRecord> records;
    std::vector<int> reference_steps;      // per phase
    std::vector<double> reference_return;  // per phase
    Schedule schedule{{Phase{}}};
    StatePrograms final_programs;
    QTable final_oasp_q;

    const EpisodeRecord& record(int episode, AgentKind kind) const {
        return records[static_cast<std::size_t>(episode) * 2 + (kind == AgentKind::oasp ? 1 : 0)];
    }
};

/// Runs both agents through the same schedule. The baseline table is reset
/// at every phase boundary; the oASP agent receives no signal.
TrialResult run_trial(const ScenarioSpec& spec, std::uint64_t trial_seed);

/// Trial i uses seed base_seed + i. Trials run on up to `threads` workers;
/// the result does not depend on the thread count.
std::vector<TrialResult> run_scenario(const ScenarioSpec& spec, std::uint64_t base_seed, unsigned threads = 1);

struct CurveRow {
    int episode = 0;
    AgentKind agent = AgentKind::baseline;
    double rmsd = 0.0;
    double return_ = 0.0;
    double steps = 0.0;
    double pairs = 0.0;
    double ref_steps = 0.0;
    double ref_return = 0.0;
};

/// Per-episode means over trials, ordered like TrialResult::records.
struct CurveTable {
    std::vector<CurveRow> rows;

    const CurveRow& at(int episode, AgentKind kind) const {
        return rows[static_cast<std::size_t>(episode) * 2 + (kind == AgentKind::oasp ? 1 : 0)];
    }
    int episodes() const { return static_cast<int>(rows.size() / 2); }

    /// Mean of `field` over episodes [first, last) for one agent.
    double window_mean(AgentKind kind, int first, int last, double CurveRow::*field) const;
};

/// Throws std::invalid_argument on an empty or ragged input.
CurveTable aggregate(const std::vector<TrialResult>& results);

inline constexpr std::string_view curves_header = "episode,agent,rmsd,return,steps,pairs,ref_steps,ref_return";

/// Header plus one row per (episode, agent); LF endings; %.6g numbers.
void write_csv(const CurveTable& table, std::ostream& out);
void write_csv(const CurveTable& table, const std::filesystem::path& path);
/// Inverse of write_csv up to the printed precision. Throws
/// std::runtime_error naming the first malformed row.
CurveTable read_csv(std::istream& in);

}  // namespace oasp
