#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "solvgp/analysis.hpp"
#include "solvgp/gpr.hpp"
#include "solvgp/model_selection.hpp"

namespace solvgp {

inline constexpr int kModelFormatVersion = 1;

// CSV with a header naming at least `id` and `smiles`; `target` required
// unless require_target is false (prediction on unlabeled data). Extra
// columns are ignored. Duplicate ids are rejected.
Dataset load_csv(const std::string& path, bool require_target = true);

void save_model(const TrainedModel& model, const std::string& path);
// Rejects version mismatches and files whose stored factorization disagrees
// with the recomputed covariance on a sampled principal minor.
TrainedModel load_model(const std::string& path);

enum class EmbedMode : std::uint8_t { Raw, Distance };

// Everything the CLI reads from --config. Fields default as documented in
// the README; validation happens before any compute.
struct RunConfig {
    KernelHyperparameters kernel;
    GPHyperparameters gp;
    HyperGrid grid;
    RadiiTable radii = RadiiTable::standard();
    double train_fraction = 0.935;
    bool normalized = true;
    EmbedMode embed_mode = EmbedMode::Raw;
    std::vector<std::vector<Element>> element_subsets;
    std::vector<std::string> metrics = {"mae", "rmse", "r2"};
    double distance_bin_width = 0.05;
    int histogram_bins = 30;
    int threads = 0;

    static RunConfig defaults();
    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

// JSON conversions shared by the CLI and the persistence layer.
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const CVReport& report, bool include_timings);
nlohmann::json to_json(const EmbeddingResult& emb);
nlohmann::json to_json(const DistanceReport& report);
nlohmann::json graph_to_json(const MolecularGraph& g, double zeta,
                             AdjacencyConvention convention);

}  // namespace solvgp
