#include "mfgstop/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mfgstop/error.hpp"
#include "mfgstop/kernels.hpp"

namespace mfgstop {

std::vector<NodeCapacity> installed_capacities(const GameModel& model,
                                               const MeanFieldProfile& profile) {
    const auto conv = active_mass(profile.conventional);
    const auto ren = active_mass(profile.renewable);
    const auto& s = model.supply;
    std::vector<NodeCapacity> caps(model.tree.node_count());
    for (const auto& node : model.tree.nodes()) {
        if (node.time == model.horizon()) continue;
        caps[node.id].conventional_gw = s.conventional_capacity * conv[node.id];
        caps[node.id].renewable_gw =
            s.renewable_base_capacity + s.renewable_capacity * (1.0 - ren[node.id]);
    }
    return caps;
}

namespace {

CurvePoint point_at(std::size_t id, const std::vector<NodeCapacity>& caps,
                    const std::vector<PricePair>& prices) {
    return {caps[id].conventional_gw, caps[id].renewable_gw, prices[id].peak, prices[id].offpeak};
}

}  // namespace

Curves build_curves(const CommonNoiseTree& tree, const std::vector<NodeCapacity>& caps,
                    const std::vector<PricePair>& prices) {
    Curves c;
    const int T = tree.horizon();
    const std::size_t lo = tree.min_leaf();
    const std::size_t hi = tree.max_leaf();
    for (int t = 0; t < T; ++t) {
        CurvePoint e;
        for (std::size_t id : tree.level(t)) {
            const double p = tree.node(id).prob;
            e.conventional_gw += p * caps[id].conventional_gw;
            e.renewable_gw += p * caps[id].renewable_gw;
            e.peak += p * prices[id].peak;
            e.offpeak += p * prices[id].offpeak;
        }
        c.expectation.push_back(e);
        c.along_min.push_back(point_at(tree.ancestor(lo, t), caps, prices));
        c.along_max.push_back(point_at(tree.ancestor(hi, t), caps, prices));
    }
    return c;
}

std::string leaf_tag(const CommonNoiseTree& tree, std::size_t node) {
    const int t = tree.node(node).time;
    const bool on_min = tree.ancestor(tree.min_leaf(), t) == node;
    const bool on_max = tree.ancestor(tree.max_leaf(), t) == node;
    if (on_min && on_max) return "min+max";
    if (on_min) return "min";
    if (on_max) return "max";
    return {};
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunReport solve(const RunConfig& config, GameModel model, std::vector<std::string> warnings,
                double seconds_build, const FPProgress& progress) {
    RunReport r;
    r.config = config;
    r.warnings = std::move(warnings);
    r.kernels = kernels::active().name;
    r.seconds_build = seconds_build;

    const auto start = std::chrono::steady_clock::now();
    r.fp = lpfp(model, fp_options(config), progress);
    r.seconds_solve = seconds_since(start);

    r.equilibrium = r.fp.average;
    r.prices = compute_prices(model, r.equilibrium);
    r.capacities = installed_capacities(model, r.equilibrium);
    r.curves = build_curves(model.tree, r.capacities, r.prices);
    r.tree = std::move(model.tree);
    return r;
}

}  // namespace

RunReport run_experiment(const RunConfig& config, const FPProgress& progress) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings;
    GameModel model = build_model(config, &warnings);
    return solve(config, std::move(model), std::move(warnings), seconds_since(start), progress);
}

RunReport deterministic_baseline(const RunConfig& config, const std::vector<double>& path,
                                 const FPProgress& progress) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings;
    GameModel model = build_model_on_path(config, path, &warnings);
    return solve(config, std::move(model), std::move(warnings), seconds_since(start), progress);
}

namespace {

std::vector<double> extreme_path(const RunConfig& config, bool highest) {
    const CommonNoiseTree tree = build_tree(config.scenario);
    return tree.node(highest ? tree.max_leaf() : tree.min_leaf()).path;
}

}  // namespace

std::vector<double> lowest_carbon_path(const RunConfig& config) { return extreme_path(config, false); }

std::vector<double> highest_carbon_path(const RunConfig& config) { return extreme_path(config, true); }

std::vector<double> read_carbon_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, fmt::format("cannot open carbon path '{}'", path));
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    for (char& ch : text) {
        if (ch == ',' || ch == ';') ch = ' ';
    }
    std::istringstream is(text);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) fail(ErrorCategory::io, fmt::format("'{}': malformed carbon level", path));
    if (out.empty()) fail(ErrorCategory::io, fmt::format("'{}': no carbon levels", path));
    return out;
}

namespace {

class CsvFile {
  public:
    CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path) {
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) fail(ErrorCategory::io, fmt::format("cannot open '{}' for writing", path.string()));
        out_ << header << '\n';
    }

    template <typename... Args>
    void row(fmt::format_string<Args...> f, Args&&... args) {
        out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
    }

    ~CsvFile() noexcept(false) {
        out_.close();
        if (!out_ && std::uncaught_exceptions() == 0) {
            fail(ErrorCategory::io, fmt::format("write to '{}' failed", path_.string()));
        }
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, fmt::format("cannot open '{}' for writing", path.string()));
    out << text;
    if (!out) fail(ErrorCategory::io, fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

void emit(const RunReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCategory::io, fmt::format("cannot create '{}': {}", dir, ec.message()));
    const fs::path base(dir);
    const auto& tree = report.tree;
    const int T = tree.node_count() == 0 ? 0 : tree.horizon();

    {
        CsvFile csv(base / "capacities.csv", "t,node_id,leaf_tag,conv_GW,ren_GW,prob");
        for (int t = 0; t < T; ++t) {
            for (std::size_t id : tree.level(t)) {
                const auto& n = tree.node(id);
                csv.row("{},{},{},{:.10g},{:.10g},{:.17g}", t, n.word, leaf_tag(tree, id),
                        report.capacities[id].conventional_gw, report.capacities[id].renewable_gw,
                        n.prob);
            }
        }
    }
    {
        CsvFile csv(base / "prices.csv", "t,node_id,peak,offpeak");
        for (int t = 0; t < T; ++t) {
            for (std::size_t id : tree.level(t)) {
                csv.row("{},{},{:.10g},{:.10g}", t, tree.node(id).word, report.prices[id].peak,
                        report.prices[id].offpeak);
            }
        }
    }
    {
        CsvFile csv(base / "exploitability.csv", "iter,eps_c,eps_r,gamma_c,gamma_r");
        for (const auto& r : report.fp.history) {
            csv.row("{},{:.17g},{:.17g},{:.17g},{:.17g}", r.iteration, r.eps.conventional,
                    r.eps.renewable, r.eps.gamma_conventional, r.eps.gamma_renewable);
        }
    }
    {
        const double ic = report.config.supply.conventional_capacity;
        const double ir = report.config.supply.renewable_base_capacity +
                          report.config.supply.renewable_capacity;
        CsvFile csv(base / "curves.csv",
                    "t,curve,conv_GW,ren_GW,peak,offpeak,conv_share,ren_share");
        const std::pair<const char*, const std::vector<CurvePoint>*> curves[] = {
            {"expectation", &report.curves.expectation},
            {"min", &report.curves.along_min},
            {"max", &report.curves.along_max},
        };
        for (const auto& [name, pts] : curves) {
            for (std::size_t t = 0; t < pts->size(); ++t) {
                const auto& p = (*pts)[t];
                csv.row("{},{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g}", t, name,
                        p.conventional_gw, p.renewable_gw, p.peak, p.offpeak, p.conventional_gw / ic,
                        p.renewable_gw / ir);
            }
        }
    }
    write_text(base / "config.json", dump_config(report.config));

    nlohmann::json meta{
        {"config_hash", config_hash(report.config)},
        {"kernels", report.kernels},
        {"iterations", report.fp.iteration},
        {"seconds_build", report.seconds_build},
        {"seconds_solve", report.seconds_solve},
        {"warnings", report.warnings},
        {"nodes", tree.node_count()},
    };
    if (!report.fp.history.empty()) {
        const auto& last = report.fp.history.back();
        meta["final_exploitability"] = {{"conventional", last.eps.conventional},
                                        {"renewable", last.eps.renewable}};
    }
    write_text(base / "metadata.json", meta.dump(2) + "\n");
}

}  // namespace mfgstop
