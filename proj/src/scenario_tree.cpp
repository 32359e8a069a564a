#include "mfgstop/scenario_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mfgstop/error.hpp"

namespace mfgstop {

void ScenarioSpec::validate() const {
    if (carbon_grid.empty()) fail(ErrorCategory::config, "scenario: empty carbon grid");
    if (!std::is_sorted(carbon_grid.begin(), carbon_grid.end()) ||
        std::adjacent_find(carbon_grid.begin(), carbon_grid.end()) != carbon_grid.end()) {
        fail(ErrorCategory::config, "scenario: carbon grid must be strictly increasing");
    }
    if (std::find(carbon_grid.begin(), carbon_grid.end(), z0) == carbon_grid.end()) {
        fail(ErrorCategory::config, fmt::format("scenario: z0={} is not a carbon grid level", z0));
    }
    if (scenarios.empty()) fail(ErrorCategory::config, "scenario: empty scenario set");
    if (prior.size() != scenarios.size()) {
        fail(ErrorCategory::config,
             fmt::format("scenario: prior has {} entries for {} scenarios", prior.size(),
                         scenarios.size()));
    }
    double total = 0.0;
    for (double p : prior) {
        if (!(p >= 0.0)) fail(ErrorCategory::config, "scenario: negative prior entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        fail(ErrorCategory::config, fmt::format("scenario: prior sums to {:.17g}", total));
    }
    if (horizon < 1) fail(ErrorCategory::config, "scenario: horizon must be at least 1");
    for (std::size_t j = 0; j < adjustment_dates.size(); ++j) {
        const int t = adjustment_dates[j];
        if (t < 1 || t >= horizon) {
            fail(ErrorCategory::config,
                 fmt::format("scenario: adjustment date {} outside [1, {})", t, horizon));
        }
        if (j > 0 && t <= adjustment_dates[j - 1]) {
            fail(ErrorCategory::config, "scenario: adjustment dates must be strictly increasing");
        }
    }
    if (stay_prob.size() != scenarios.size()) {
        fail(ErrorCategory::config, "scenario: stay_prob needs one row per scenario");
    }
    for (const auto& row : stay_prob) {
        if (row.size() != adjustment_dates.size()) {
            fail(ErrorCategory::config, "scenario: stay_prob row length differs from date count");
        }
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) {
                fail(ErrorCategory::config, fmt::format("scenario: stay_prob {} outside [0,1]", p));
            }
        }
    }
}

std::size_t ScenarioSpec::level_index(double z) const {
    const auto it = std::find(carbon_grid.begin(), carbon_grid.end(), z);
    if (it == carbon_grid.end()) {
        fail(ErrorCategory::model, fmt::format("carbon level {} is not on the grid", z));
    }
    return static_cast<std::size_t>(it - carbon_grid.begin());
}

int ScenarioSpec::date_index(int t) const {
    const auto it = std::lower_bound(adjustment_dates.begin(), adjustment_dates.end(), t);
    if (it == adjustment_dates.end() || *it != t) return -1;
    return static_cast<int>(it - adjustment_dates.begin());
}

double ScenarioSpec::kernel(int t, std::size_t s, double z_prev, double z_next) const {
    const int j = date_index(t);
    const std::size_t i = level_index(z_prev);
    const std::size_t k = level_index(z_next);
    if (j < 0 || i + 1 == carbon_grid.size()) return k == i ? 1.0 : 0.0;
    const double p = stay_prob[s][static_cast<std::size_t>(j)];
    if (k == i) return p;
    if (k == i + 1) return 1.0 - p;
    return 0.0;
}

CommonNoiseTree::CommonNoiseTree(ScenarioSpec spec, std::vector<TrajectoryNode> nodes)
    : spec_(std::move(spec)), nodes_(std::move(nodes)) {
    int horizon = 0;
    for (const auto& n : nodes_) horizon = std::max(horizon, n.time);
    levels_.assign(static_cast<std::size_t>(horizon) + 1, {});
    position_.assign(nodes_.size(), 0);
    for (const auto& n : nodes_) {
        auto& lvl = levels_[static_cast<std::size_t>(n.time)];
        position_[n.id] = lvl.size();
        lvl.push_back(n.id);
    }
}

std::size_t CommonNoiseTree::ancestor(std::size_t id, int s) const {
    if (s > nodes_[id].time) {
        fail(ErrorCategory::model,
             fmt::format("ancestor time {} after node time {}", s, nodes_[id].time));
    }
    while (nodes_[id].time > s) id = nodes_[id].parent;
    return id;
}

std::size_t CommonNoiseTree::min_leaf() const {
    std::size_t id = root().id;
    while (!nodes_[id].children.empty()) id = nodes_[id].children.front().node;
    return id;
}

std::size_t CommonNoiseTree::max_leaf() const {
    std::size_t id = root().id;
    while (!nodes_[id].children.empty()) id = nodes_[id].children.back().node;
    return id;
}

namespace {

std::vector<double> normalized(const std::vector<double>& w, double total) {
    std::vector<double> out(w.size());
    for (std::size_t s = 0; s < w.size(); ++s) out[s] = w[s] / total;
    return out;
}

}  // namespace

CommonNoiseTree build_tree(const ScenarioSpec& spec) {
    spec.validate();
    const std::size_t n_scen = spec.scenarios.size();

    std::vector<TrajectoryNode> nodes;
    TrajectoryNode root;
    root.id = 0;
    root.time = 0;
    root.path = {spec.z0};
    root.joint = spec.prior;
    root.prob = std::accumulate(spec.prior.begin(), spec.prior.end(), 0.0);
    root.posterior = normalized(root.joint, root.prob);
    root.parent = 0;
    root.word = "n";
    nodes.push_back(std::move(root));

    std::vector<std::size_t> frontier{0};
    for (int t = 1; t <= spec.horizon; ++t) {
        const bool is_date = spec.date_index(t) >= 0;
        std::vector<std::size_t> next;
        for (std::size_t pid : frontier) {
            const double z = nodes[pid].carbon();
            const std::size_t i = spec.level_index(z);
            std::vector<double> targets{z};
            if (is_date && i + 1 < spec.carbon_grid.size()) targets.push_back(spec.carbon_grid[i + 1]);

            for (std::size_t k = 0; k < targets.size(); ++k) {
                TrajectoryNode child;
                child.joint.resize(n_scen);
                double prob = 0.0;
                for (std::size_t s = 0; s < n_scen; ++s) {
                    child.joint[s] = nodes[pid].joint[s] * spec.kernel(t, s, z, targets[k]);
                    prob += child.joint[s];
                }
                if (prob == 0.0) continue;
                child.id = nodes.size();
                child.time = t;
                child.path = nodes[pid].path;
                child.path.push_back(targets[k]);
                child.prob = prob;
                child.posterior = normalized(child.joint, prob);
                child.parent = pid;
                child.word = nodes[pid].word;
                if (is_date) child.word += (k == 0 ? 'S' : 'J');
                nodes[pid].children.push_back({child.id, prob / nodes[pid].prob});
                next.push_back(child.id);
                nodes.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    return CommonNoiseTree(spec, std::move(nodes));
}

CommonNoiseTree single_path_tree(const std::vector<double>& path) {
    if (path.empty()) fail(ErrorCategory::config, "single path tree: empty path");
    ScenarioSpec spec;
    spec.carbon_grid = path;
    std::sort(spec.carbon_grid.begin(), spec.carbon_grid.end());
    spec.carbon_grid.erase(std::unique(spec.carbon_grid.begin(), spec.carbon_grid.end()),
                           spec.carbon_grid.end());
    spec.z0 = path.front();
    spec.scenarios = {"deterministic"};
    spec.prior = {1.0};
    spec.stay_prob = {{}};
    spec.horizon = static_cast<int>(path.size()) - 1;

    std::vector<TrajectoryNode> nodes;
    for (std::size_t t = 0; t < path.size(); ++t) {
        TrajectoryNode n;
        n.id = t;
        n.time = static_cast<int>(t);
        n.path.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        n.prob = 1.0;
        n.posterior = {1.0};
        n.joint = {1.0};
        n.parent = t == 0 ? 0 : t - 1;
        n.word = "n";
        if (t + 1 < path.size()) n.children.push_back({t + 1, 1.0});
        nodes.push_back(std::move(n));
    }
    return CommonNoiseTree(std::move(spec), std::move(nodes));
}

namespace {

std::vector<double> path_joint(const ScenarioSpec& spec, const std::vector<double>& path) {
    if (path.empty() || path.front() != spec.z0) {
        fail(ErrorCategory::model, "carbon path must start at z0");
    }
    if (path.size() > static_cast<std::size_t>(spec.horizon) + 1) {
        fail(ErrorCategory::model, "carbon path longer than the horizon");
    }
    std::vector<double> joint = spec.prior;
    for (std::size_t k = 1; k < path.size(); ++k) {
        for (std::size_t s = 0; s < joint.size(); ++s) {
            joint[s] *= spec.kernel(static_cast<int>(k), s, path[k - 1], path[k]);
        }
    }
    return joint;
}

}  // namespace

double path_probability(const ScenarioSpec& spec, const std::vector<double>& path) {
    const auto joint = path_joint(spec, path);
    return std::accumulate(joint.begin(), joint.end(), 0.0);
}

std::vector<double> posterior(const ScenarioSpec& spec, const std::vector<double>& path) {
    const auto joint = path_joint(spec, path);
    const double total = std::accumulate(joint.begin(), joint.end(), 0.0);
    if (total == 0.0) fail(ErrorCategory::model, "posterior undefined on a zero-probability path");
    return normalized(joint, total);
}

double carbon_at(const TrajectoryNode& node, int s) {
    if (s < 0 || s > node.time) {
        fail(ErrorCategory::model,
             fmt::format("carbon_at: time {} outside [0, {}]", s, node.time));
    }
    return node.path[static_cast<std::size_t>(s)];
}

void to_json(nlohmann::json& j, const ScenarioSpec& spec) {
    j = nlohmann::json{
        {"carbon_grid", spec.carbon_grid},
        {"z0", spec.z0},
        {"scenarios", spec.scenarios},
        {"prior", spec.prior},
        {"adjustment_dates", spec.adjustment_dates},
        {"stay_prob", spec.stay_prob},
        {"horizon", spec.horizon},
    };
}

void from_json(const nlohmann::json& j, ScenarioSpec& spec) {
    j.at("carbon_grid").get_to(spec.carbon_grid);
    j.at("z0").get_to(spec.z0);
    j.at("scenarios").get_to(spec.scenarios);
    j.at("prior").get_to(spec.prior);
    j.at("adjustment_dates").get_to(spec.adjustment_dates);
    j.at("stay_prob").get_to(spec.stay_prob);
    j.at("horizon").get_to(spec.horizon);
}

void to_json(nlohmann::json& j, const CommonNoiseTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes()) {
        nlohmann::json children = nlohmann::json::array();
        for (const auto& c : n.children) children.push_back({{"node", c.node}, {"prob", c.prob}});
        nodes.push_back({
            {"id", n.id},
            {"time", n.time},
            {"word", n.word},
            {"path", n.path},
            {"prob", n.prob},
            {"posterior", n.posterior},
            {"children", std::move(children)},
        });
    }
    j = nlohmann::json{{"spec", tree.spec()}, {"nodes", std::move(nodes)}};
}

}  // namespace mfgstop
