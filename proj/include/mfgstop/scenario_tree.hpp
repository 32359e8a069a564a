#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mfgstop {

// Hidden-regime carbon price process on an ordered grid of levels.
//
// At an adjustment date t the price moves from level i to level i+1 with
// probability 1 - stay_prob[s][j] (j the index of t among the dates) and
// otherwise stays; at the top level it always stays. Between dates it never
// moves. The kernel indexed by t drives the transition from t-1 to t.
struct ScenarioSpec {
    std::vector<double> carbon_grid;
    double z0 = 0.0;
    std::vector<std::string> scenarios;
    std::vector<double> prior;
    std::vector<int> adjustment_dates;
    std::vector<std::vector<double>> stay_prob;  // [scenario][date index]
    int horizon = 0;

    void validate() const;

    std::size_t level_index(double z) const;

    /// Index of t among the adjustment dates, or -1.
    int date_index(int t) const;

    /// pi^Z_t(s, z_prev; z_next).
    double kernel(int t, std::size_t s, double z_prev, double z_next) const;

    bool operator==(const ScenarioSpec&) const = default;
};

struct TreeChild {
    std::size_t node;
    double prob;  // pi^U_{t+1}(u; u')
};

struct TrajectoryNode {
    std::size_t id;  // index into CommonNoiseTree::nodes
    int time;
    std::vector<double> path;  // z_0 .. z_time
    double prob;               // p_t(u)
    std::vector<double> posterior;
    std::vector<TreeChild> children;
    std::size_t parent;     // == id for the root
    std::string word;       // "n" followed by S (stay) / J (jump) per adjustment date
    std::vector<double> joint;  // prior(s) * prod of kernels along the path

    double carbon() const { return path.back(); }
};

class CommonNoiseTree {
  public:
    CommonNoiseTree() = default;
    CommonNoiseTree(ScenarioSpec spec, std::vector<TrajectoryNode> nodes);

    const ScenarioSpec& spec() const { return spec_; }
    int horizon() const { return static_cast<int>(levels_.size()) - 1; }
    std::size_t node_count() const { return nodes_.size(); }

    const TrajectoryNode& node(std::size_t id) const { return nodes_[id]; }
    const std::vector<TrajectoryNode>& nodes() const { return nodes_; }

    /// Node ids of Omega_t, ordered by word.
    const std::vector<std::size_t>& level(int t) const { return levels_[t]; }

    const TrajectoryNode& root() const { return nodes_[levels_[0][0]]; }

    /// Ancestor of node at time s <= node.time.
    std::size_t ancestor(std::size_t id, int s) const;

    /// Leaf reached by always staying (lowest carbon path).
    std::size_t min_leaf() const;
    /// Leaf reached by always jumping when possible (highest carbon path).
    std::size_t max_leaf() const;

    /// Offset of node among the nodes of its level.
    std::size_t position(std::size_t id) const { return position_[id]; }

  private:
    ScenarioSpec spec_;
    std::vector<TrajectoryNode> nodes_;
    std::vector<std::vector<std::size_t>> levels_;
    std::vector<std::size_t> position_;
};

CommonNoiseTree build_tree(const ScenarioSpec& spec);

/// Tree with one node per time following a fixed carbon path with probability 1.
CommonNoiseTree single_path_tree(const std::vector<double>& path);

/// Marginal probability of observing the carbon path (z_0, ..., z_t).
double path_probability(const ScenarioSpec& spec, const std::vector<double>& path);

/// Posterior law of the scenario given a positive-probability path.
std::vector<double> posterior(const ScenarioSpec& spec, const std::vector<double>& path);

/// Carbon level at time s along the history stored in node.
double carbon_at(const TrajectoryNode& node, int s);

void to_json(nlohmann::json& j, const CommonNoiseTree& tree);
void to_json(nlohmann::json& j, const ScenarioSpec& spec);
void from_json(const nlohmann::json& j, ScenarioSpec& spec);

}  // namespace mfgstop
