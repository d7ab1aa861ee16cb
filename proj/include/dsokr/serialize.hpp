#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dsokr/basis.hpp"
#include "dsokr/kernels.hpp"
#include "dsokr/mlp.hpp"
#include "dsokr/sketch.hpp"
#include "dsokr/structured_output.hpp"

namespace dsokr {

// JSON artifact formats. Matrices are stored as {rows, cols, data} with
// row-major flat data; sketches as their defining (kind, dims, seed, q)
// tuple so loading redraws the identical matrix.

nlohmann::json to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SketchMatrix& sketch);
SketchMatrix sketch_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StructuredOutput& y);
StructuredOutput structured_output_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SketchedBasis& basis);
SketchedBasis basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MLPRegressor& model);
MLPRegressor mlp_from_json(const nlohmann::json& j);

// epoch,train_mse,val_mse CSV with a header line.
void save_history_csv(const std::string& path, const std::vector<EpochStats>& history);
std::vector<EpochStats> load_history_csv(const std::string& path);

void save_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

}  // namespace dsokr
