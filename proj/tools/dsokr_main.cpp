// Command-line pipeline: datagen -> select-m -> fit -> eval. Commands
// compose through plain JSON/CSV files and every run writes a manifest with
// the effective configuration, so runs are reproducible from the artifacts
// alone. Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsokr/basis.hpp"
#include "dsokr/datasets.hpp"
#include "dsokr/decode.hpp"
#include "dsokr/ensemble.hpp"
#include "dsokr/kernels.hpp"
#include "dsokr/metrics.hpp"
#include "dsokr/mlp.hpp"
#include "dsokr/selection.hpp"
#include "dsokr/serialize.hpp"
#include "dsokr/sketch.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<dsokr::StructuredOutput> load_outputs(const std::string& path) {
    const std::string ext = fs::path(path).extension().string();
    std::vector<dsokr::StructuredOutput> out;
    if (ext == ".csv") return dsokr::rows_as_outputs(dsokr::load_csv_matrix(path));
    if (ext == ".fps") {
        for (auto& fp : dsokr::load_fingerprints(path)) out.emplace_back(std::move(fp));
        return out;
    }
    if (ext == ".json") {
        for (auto& g : dsokr::load_graphs_json(path)) out.emplace_back(std::move(g));
        return out;
    }
    throw std::invalid_argument("unsupported output file extension '" + ext +
                                "' (expected .csv, .fps, or .json): " + path);
}

std::vector<int> load_indices(const std::string& path) {
    const Eigen::MatrixXd m = dsokr::load_csv_matrix(path);
    std::vector<int> idx;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) idx.push_back(static_cast<int>(m(i, j)));
    return idx;
}

// Shared kernel/sketch flag bundle.
struct KernelFlags {
    std::string kind = "linear";
    double gamma = 1.0;
    int wl_iterations = 3;
    bool normalize = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kernel", kind,
                        "output kernel: linear, gaussian, cosine, tanimoto, "
                        "vertex-histogram, wl-subtree, shortest-path");
        cmd->add_option("--gamma", gamma, "gaussian kernel bandwidth");
        cmd->add_option("--wl-iterations", wl_iterations, "WL subtree iterations");
        cmd->add_flag("--normalize", normalize, "cosine-normalize the kernel");
    }
    dsokr::KernelSpec spec() const {
        return {dsokr::kernel_kind_from_name(kind), gamma, wl_iterations, normalize};
    }
    json to_json() const { return dsokr::to_json(spec()); }
};

struct SketchFlags {
    std::string kind = "sub-sample";
    double sparsity = 0.1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sketch", kind, "sketch kind: sub-sample, gaussian, p-sparsified");
        cmd->add_option("--sparsity", sparsity, "p-sparsified nonzero probability q");
    }
    dsokr::SketchKind sketch_kind() const { return dsokr::sketch_kind_from_name(kind); }
};

void write_manifest(const std::string& out_dir, const std::string& command, const json& config) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    dsokr::save_json((fs::path(out_dir) / "run_manifest.json").string(), manifest);
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());
}

// ---- datagen ----

void setup_datagen(CLI::App& app) {
    auto* cmd = app.add_subcommand("datagen", "generate the synthetic linear-subspace dataset");
    auto spec = std::make_shared<dsokr::SyntheticSpec>();
    auto out_dir = std::make_shared<std::string>("data");
    cmd->add_option("--n-train", spec->n_train, "training samples");
    cmd->add_option("--n-val", spec->n_val, "validation samples");
    cmd->add_option("--n-test", spec->n_test, "test samples");
    cmd->add_option("--dx", spec->d_x, "input dimension");
    cmd->add_option("--dy", spec->d_y, "output dimension");
    cmd->add_option("--d", spec->d, "latent subspace dimension");
    cmd->add_option("--noise", spec->noise_variance, "output noise variance");
    cmd->add_option("--seed", spec->seed, "generator seed");
    cmd->add_option("--out", *out_dir, "output directory");

    cmd->callback([spec, out_dir] {
        const dsokr::SyntheticData data = dsokr::gen_synthetic(*spec);
        ensure_out_dir(*out_dir);
        const fs::path dir(*out_dir);
        dsokr::save_csv_matrix((dir / "train_x.csv").string(), data.train.inputs);
        dsokr::save_csv_matrix((dir / "train_y.csv").string(), data.train.outputs);
        dsokr::save_csv_matrix((dir / "val_x.csv").string(), data.val.inputs);
        dsokr::save_csv_matrix((dir / "val_y.csv").string(), data.val.outputs);
        dsokr::save_csv_matrix((dir / "test_x.csv").string(), data.test.inputs);
        dsokr::save_csv_matrix((dir / "test_y.csv").string(), data.test.outputs);
        json config = {{"n_train", spec->n_train}, {"n_val", spec->n_val},
                       {"n_test", spec->n_test},  {"d_x", spec->d_x},
                       {"d_y", spec->d_y},        {"d", spec->d},
                       {"noise_variance", spec->noise_variance}, {"seed", spec->seed}};
        config["files"] = {"train_x.csv", "train_y.csv", "val_x.csv",
                           "val_y.csv",   "test_x.csv",  "test_y.csv"};
        write_manifest(*out_dir, "datagen", config);
        std::cout << "wrote " << spec->n_train << "/" << spec->n_val << "/" << spec->n_test
                  << " train/val/test samples to " << *out_dir << "\n";
    });
}

// ---- select-m ----

void setup_select_m(CLI::App& app) {
    auto* cmd = app.add_subcommand("select-m", "sketch-size selection: leverage scores and oracle sweep");
    struct Opts {
        std::string train_y, val_y, out_dir = "select";
        KernelFlags kernel;
        SketchFlags sketch;
        std::vector<int> ms;
        int replicates = 5;
        bool als = false;
        double lambda = 1e-3;
        int ns = 0;  // 0 = all
        std::string task = "linear-mse";
        std::uint64_t seed = 0;
        double tol = 0.05;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--train-y", o->train_y, "training outputs file")->required();
    cmd->add_option("--val-y", o->val_y, "validation outputs file (needed for the sweep)");
    cmd->add_option("--out", o->out_dir, "output directory");
    o->kernel.attach(cmd);
    o->sketch.attach(cmd);
    cmd->add_option("--ms", o->ms, "sketch sizes to sweep, ascending");
    cmd->add_option("--replicates", o->replicates, "sketch replicates per m");
    cmd->add_flag("--als", o->als, "also compute approximate ridge leverage scores");
    cmd->add_option("--lambda", o->lambda, "leverage-score ridge parameter");
    cmd->add_option("--ns", o->ns, "leverage-score column sample size (0 = all)");
    cmd->add_option("--task", o->task, "sweep task: linear-mse or ranking");
    cmd->add_option("--seed", o->seed, "sweep seed");
    cmd->add_option("--tol", o->tol, "relative tolerance for the suggested m");

    cmd->callback([o] {
        const auto ys_train = load_outputs(o->train_y);
        const dsokr::KernelSpec kernel = o->kernel.spec();
        ensure_out_dir(o->out_dir);
        const fs::path dir(o->out_dir);
        json config = {{"train_y", o->train_y}, {"val_y", o->val_y},
                       {"kernel", o->kernel.to_json()}, {"sketch", o->sketch.kind},
                       {"ms", o->ms}, {"replicates", o->replicates},
                       {"als", o->als}, {"lambda", o->lambda}, {"ns", o->ns},
                       {"task", o->task}, {"seed", o->seed}, {"tol", o->tol}};

        if (o->als) {
            const int n = static_cast<int>(ys_train.size());
            const int ns = o->ns > 0 ? o->ns : n;
            const Eigen::VectorXd scores =
                dsokr::approximate_leverage_scores(kernel, ys_train, o->lambda, ns, o->seed);
            dsokr::save_csv_matrix((dir / "als_curve.csv").string(), scores);
            std::cout << "leverage scores: top " << scores(0) << ", sum " << scores.sum() << "\n";
        }

        if (!o->ms.empty()) {
            if (o->val_y.empty())
                throw std::invalid_argument("--ms sweep requires --val-y");
            const auto ys_val = load_outputs(o->val_y);
            dsokr::SweepConfig cfg;
            cfg.sketch_kind = o->sketch.sketch_kind();
            cfg.seed = o->seed;
            cfg.replicates = o->replicates;
            cfg.sparsity = o->sketch.sparsity;
            std::vector<dsokr::SweepRow> table;
            bool lower_is_better = true;
            if (o->task == "linear-mse") {
                table = dsokr::perfect_h_sweep(kernel, ys_train, ys_val, o->ms, cfg);
            } else if (o->task == "ranking") {
                std::vector<int> truth(ys_val.size());
                for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<int>(i);
                table = dsokr::perfect_h_sweep(kernel, ys_train, ys_val, truth, ys_val, o->ms,
                                               dsokr::SweepTask::CandidateRanking, cfg);
                lower_is_better = false;
            } else {
                throw std::invalid_argument("unknown sweep task: " + o->task);
            }
            Eigen::MatrixXd csv(table.size(), 3 + o->replicates);
            for (std::size_t i = 0; i < table.size(); ++i) {
                csv(i, 0) = table[i].m;
                csv(i, 1) = table[i].mean_metric;
                csv(i, 2) = table[i].std_metric;
                for (int r = 0; r < o->replicates; ++r) csv(i, 3 + r) = table[i].per_replicate[r];
            }
            dsokr::save_csv_matrix((dir / "sweep_curve.csv").string(), csv);
            const int m_star = dsokr::suggest_m(table, lower_is_better, o->tol);
            config["suggested_m"] = m_star;
            std::cout << "suggested m: " << m_star << "\n";
        }
        write_manifest(o->out_dir, "select-m", config);
    });
}

// ---- fit ----

void setup_fit(CLI::App& app) {
    auto* cmd = app.add_subcommand("fit", "fit the sketched basis and train the surrogate network");
    struct Opts {
        std::string train_x, train_y, val_x, val_y, out_dir = "model";
        KernelFlags kernel;
        SketchFlags sketch;
        int m = 64;
        std::uint64_t sketch_seed = 0;
        double rank_tol = 1e-10;
        std::vector<int> hidden;
        std::string activation = "relu";
        dsokr::TrainConfig train;
        bool no_sketch_baseline = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--train-x", o->train_x, "training inputs CSV")->required();
    cmd->add_option("--train-y", o->train_y, "training outputs file")->required();
    cmd->add_option("--val-x", o->val_x, "validation inputs CSV")->required();
    cmd->add_option("--val-y", o->val_y, "validation outputs file")->required();
    cmd->add_option("--out", o->out_dir, "output directory");
    o->kernel.attach(cmd);
    o->sketch.attach(cmd);
    cmd->add_option("--m", o->m, "sketch size");
    cmd->add_option("--sketch-seed", o->sketch_seed, "sketch draw seed");
    cmd->add_option("--rank-tol", o->rank_tol, "basis rank truncation tolerance");
    cmd->add_option("--hidden", o->hidden, "hidden layer widths (empty = single-layer perceptron)");
    cmd->add_option("--activation", o->activation, "hidden activation: relu, tanh, identity");
    cmd->add_option("--lr", o->train.learning_rate, "Adam learning rate");
    cmd->add_option("--batch-size", o->train.batch_size, "minibatch size");
    cmd->add_option("--epochs", o->train.max_epochs, "maximum epochs");
    cmd->add_option("--patience", o->train.patience, "early-stopping patience");
    cmd->add_option("--seed", o->train.seed, "network init / shuffle seed");
    cmd->add_flag("--no-sketch-baseline", o->no_sketch_baseline,
                  "train a direct d_Y-output network on the raw outputs instead");

    cmd->callback([o] {
        const Eigen::MatrixXd train_x = dsokr::load_csv_matrix(o->train_x);
        const Eigen::MatrixXd val_x = dsokr::load_csv_matrix(o->val_x);
        ensure_out_dir(o->out_dir);
        const fs::path dir(o->out_dir);
        json config = {{"train_x", o->train_x}, {"train_y", o->train_y},
                       {"val_x", o->val_x},     {"val_y", o->val_y},
                       {"kernel", o->kernel.to_json()}, {"sketch", o->sketch.kind},
                       {"m", o->m}, {"sketch_seed", o->sketch_seed}, {"rank_tol", o->rank_tol},
                       {"hidden", o->hidden}, {"activation", o->activation},
                       {"learning_rate", o->train.learning_rate},
                       {"batch_size", o->train.batch_size}, {"max_epochs", o->train.max_epochs},
                       {"patience", o->train.patience}, {"seed", o->train.seed},
                       {"no_sketch_baseline", o->no_sketch_baseline}};

        Eigen::MatrixXd train_t, val_t;
        if (o->no_sketch_baseline) {
            train_t = dsokr::load_csv_matrix(o->train_y);
            val_t = dsokr::load_csv_matrix(o->val_y);
        } else {
            const auto ys_train = load_outputs(o->train_y);
            const auto ys_val = load_outputs(o->val_y);
            const dsokr::SketchMatrix sketch =
                dsokr::SketchMatrix::draw(o->sketch.sketch_kind(),
                                          static_cast<int>(ys_train.size()), o->m, o->sketch_seed,
                                          o->sketch.sparsity);
            const dsokr::SketchedBasis basis =
                dsokr::fit_basis(o->kernel.spec(), ys_train, sketch, o->rank_tol);
            dsokr::save_json((dir / "basis.json").string(), dsokr::to_json(basis));
            train_t = dsokr::feature_matrix(basis, ys_train);
            val_t = dsokr::feature_matrix(basis, ys_val);
            config["basis_rank"] = basis.rank();
        }
        std::vector<int> dims;
        dims.push_back(static_cast<int>(train_x.cols()));
        dims.insert(dims.end(), o->hidden.begin(), o->hidden.end());
        dims.push_back(static_cast<int>(train_t.cols()));
        dsokr::MLPRegressor net = dsokr::MLPRegressor::init(
            dims, dsokr::activation_from_name(o->activation), o->train.seed);
        const dsokr::TrainResult result = dsokr::train(net, train_x, train_t, val_x, val_t, o->train);
        dsokr::save_json((dir / "model.json").string(), dsokr::to_json(result.model));
        dsokr::save_history_csv((dir / "history.csv").string(), result.history);
        config["best_epoch"] = result.best_epoch;
        config["best_val_mse"] = result.best_val_mse;
        config["parameter_count"] = result.model.parameter_count();
        write_manifest(o->out_dir, "fit", config);
        std::cout << "best epoch " << result.best_epoch << ", val mse " << result.best_val_mse
                  << ", parameters " << result.model.parameter_count() << "\n";
    });
}

// ---- eval ----

struct ModelPair {
    dsokr::MLPRegressor model;
    dsokr::SketchedBasis basis;
};

ModelPair load_model_pair(const std::string& model_path, const std::string& basis_path) {
    ModelPair p{dsokr::mlp_from_json(dsokr::load_json(model_path)),
                dsokr::basis_from_json(dsokr::load_json(basis_path))};
    if (p.model.output_dim() != p.basis.rank())
        throw std::invalid_argument("model output dimension " + std::to_string(p.model.output_dim()) +
                                    " does not match basis rank " + std::to_string(p.basis.rank()));
    return p;
}

void setup_eval(CLI::App& app) {
    for (const char* name : {"eval", "decode"}) {
        auto* cmd = app.add_subcommand(
            name, "decode test inputs against a candidate set and report retrieval metrics");
        struct Opts {
            std::string model, basis, test_x, test_y, candidates, truth, ensemble,
                out_dir = "eval";
            bool perfect_h = false;
        };
        auto o = std::make_shared<Opts>();
        cmd->add_option("--model", o->model, "model checkpoint JSON");
        cmd->add_option("--basis", o->basis, "basis JSON");
        cmd->add_option("--test-x", o->test_x, "test inputs CSV");
        cmd->add_option("--test-y", o->test_y, "test outputs file")->required();
        cmd->add_option("--candidates", o->candidates,
                        "candidate outputs file (default: the test outputs)");
        cmd->add_option("--truth", o->truth,
                        "CSV of true candidate indices (default: identity when the "
                        "candidate set is the test outputs)");
        cmd->add_option("--ensemble", o->ensemble, "ensemble manifest JSON");
        cmd->add_flag("--perfect-h", o->perfect_h,
                      "score the oracle surrogate psi(y_true) instead of the network");
        cmd->add_option("--out", o->out_dir, "output directory");

        cmd->callback([o] {
            const auto ys_test = load_outputs(o->test_y);
            const int n_test = static_cast<int>(ys_test.size());

            std::vector<dsokr::StructuredOutput> candidates =
                o->candidates.empty() ? ys_test : load_outputs(o->candidates);
            std::vector<int> truth;
            if (!o->truth.empty()) {
                truth = load_indices(o->truth);
                if (static_cast<int>(truth.size()) != n_test)
                    throw std::invalid_argument("--truth must list one candidate index per test item");
            } else if (o->candidates.empty()) {
                truth.resize(n_test);
                for (int i = 0; i < n_test; ++i) truth[i] = i;
            } else {
                throw std::invalid_argument("--candidates requires --truth");
            }

            std::vector<ModelPair> models;
            dsokr::AggregationMode mode = dsokr::AggregationMode::RankSum;
            std::vector<double> weights;
            if (!o->ensemble.empty()) {
                const json manifest = dsokr::load_json(o->ensemble);
                mode = dsokr::aggregation_mode_from_name(manifest.value("mode", "rank-sum"));
                for (const auto& jm : manifest.at("models"))
                    models.push_back(load_model_pair(jm.at("model").get<std::string>(),
                                                     jm.at("basis").get<std::string>()));
                if (manifest.contains("weights"))
                    weights = manifest["weights"].get<std::vector<double>>();
                if (weights.empty())
                    weights.assign(models.size(), 1.0 / static_cast<double>(models.size()));
            } else {
                if (o->basis.empty())
                    throw std::invalid_argument("need --basis (with --model or --perfect-h), "
                                                "or --ensemble");
                if (o->perfect_h) {
                    models.push_back(
                        {dsokr::MLPRegressor{}, dsokr::basis_from_json(dsokr::load_json(o->basis))});
                } else {
                    if (o->model.empty())
                        throw std::invalid_argument("need --model unless --perfect-h is set");
                    models.push_back(load_model_pair(o->model, o->basis));
                }
                weights = {1.0};
            }
            if (!o->perfect_h && o->test_x.empty() )
                throw std::invalid_argument("need --test-x unless --perfect-h is set");
            Eigen::MatrixXd test_x;
            if (!o->test_x.empty()) {
                test_x = dsokr::load_csv_matrix(o->test_x);
                if (test_x.rows() != n_test)
                    throw std::invalid_argument("--test-x row count does not match --test-y");
            }

            std::vector<dsokr::CandidateSet> cands;
            cands.reserve(models.size());
            for (const auto& mp : models) cands.push_back(dsokr::build_candidates(mp.basis, candidates));

            ensure_out_dir(o->out_dir);
            const fs::path dir(o->out_dir);
            std::vector<int> ranks(n_test);
            std::vector<int> predicted(n_test);
            Eigen::MatrixXd z_pred, psi_truth;
            if (models.size() == 1 && !o->perfect_h) {
                z_pred = models[0].model.forward_batch(test_x);
                psi_truth = dsokr::feature_matrix(models[0].basis, ys_test);
            }
            for (int i = 0; i < n_test; ++i) {
                std::vector<Eigen::VectorXd> scores;
                scores.reserve(models.size());
                for (std::size_t t = 0; t < models.size(); ++t) {
                    const Eigen::VectorXd z =
                        o->perfect_h ? dsokr::feature_map(models[t].basis, ys_test[i])
                                     : models[t].model.forward(test_x.row(i).transpose());
                    scores.push_back(dsokr::candidate_scores(z, cands[t], true));
                }
                if (scores.size() == 1) {
                    Eigen::Index best;
                    scores[0].maxCoeff(&best);
                    predicted[i] = static_cast<int>(best);
                    ranks[i] = dsokr::rank_of_truth(scores[0], truth[i]);
                } else {
                    const std::vector<int> order = dsokr::aggregate(mode, scores, weights);
                    predicted[i] = order[0];
                    for (std::size_t pos = 0; pos < order.size(); ++pos)
                        if (order[pos] == truth[i]) ranks[i] = static_cast<int>(pos) + 1;
                }
            }
            const dsokr::RetrievalMetrics rm = dsokr::retrieval_metrics(ranks);
            std::vector<dsokr::StructuredOutput> decoded;
            decoded.reserve(n_test);
            for (int i = 0; i < n_test; ++i) decoded.push_back(candidates[predicted[i]]);

            json report = {{"mrr", rm.mrr},
                           {"hits_at_1", rm.hits_at_1},
                           {"hits_at_10", rm.hits_at_10},
                           {"mean_rank", rm.mean_rank},
                           {"n_items", n_test},
                           {"n_candidates", static_cast<int>(candidates.size())}};
            report["mean_kernel_loss"] =
                dsokr::mean_kernel_loss(models[0].basis.kernel, decoded, ys_test);
            if (z_pred.size() > 0) report["feature_mse"] = dsokr::mse(z_pred, psi_truth);

            dsokr::save_json((dir / "metrics.json").string(), report);
            Eigen::MatrixXd per_item(n_test, 3);
            for (int i = 0; i < n_test; ++i) {
                per_item(i, 0) = truth[i];
                per_item(i, 1) = predicted[i];
                per_item(i, 2) = ranks[i];
            }
            dsokr::save_csv_matrix((dir / "per_item.csv").string(), per_item);
            json config = {{"model", o->model}, {"basis", o->basis}, {"test_x", o->test_x},
                           {"test_y", o->test_y}, {"candidates", o->candidates},
                           {"truth", o->truth}, {"ensemble", o->ensemble},
                           {"perfect_h", o->perfect_h},
                           {"mode", dsokr::aggregation_mode_name(mode)}};
            write_manifest(o->out_dir, "eval", config);
            std::cout << "mrr " << rm.mrr << ", hits@1 " << rm.hits_at_1 << ", hits@10 "
                      << rm.hits_at_10 << ", mean rank " << rm.mean_rank << "\n";
        });
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sketched output kernel regression pipeline"};
    app.require_subcommand(1);
    setup_datagen(app);
    setup_select_m(app);
    setup_fit(app);
    setup_eval(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
