#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsf/dataset_io.hpp"
#include "rsf/error.hpp"
#include "rsf/forest.hpp"
#include "rsf/model_io.hpp"
#include "rsf/synth.hpp"
#include "rsf/text.hpp"

namespace rsf::cli {

namespace {

using nlohmann::json;

// Bad invocations (missing required flags, malformed flag values) exit with
// code 1; data and model problems exit with code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool logging_enabled() {
    const char* level = std::getenv("RSF_LOG");
    if (!level) return false;
    const std::string v = level;
    return v == "info" || v == "debug" || v == "1";
}

void log_info(const std::string& message) {
    if (logging_enabled()) std::cerr << "[rsf] " << message << "\n";
}

// Every option all commands accept through --config files; unknown keys are
// rejected so typos cannot silently change an experiment.
const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "mode",      "out",       "seed",    "n",       "vocab",   "mean-length",
        "mean-set-size", "bag",   "data",    "model",   "trees",   "max-features",
        "pairs",     "max-depth", "min-split", "min-leaf", "workers", "reps",
        "folds",     "name",      "fast-path"};
    return keys;
}

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open config '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw FormatError("config '" + path + "' must be a JSON object");
    for (const auto& [key, _] : cfg.items()) {
        const auto& known = known_config_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw DataError("config '" + path + "': unknown key '" + key + "'");
        }
    }
    return cfg;
}

// Command-line flags win over config-file values; fill only unset options.
template <typename T>
void merge(const json& cfg, const char* key, std::optional<T>& slot) {
    if (!slot && cfg.contains(key)) slot = cfg.at(key).get<T>();
}

MaxFeatures parse_max_features(const std::string& text) {
    try {
        if (text.find('-') != std::string::npos) throw DataError("negative");
        if (text.find('.') != std::string::npos) {
            return MaxFeatures::from_fraction(parse_double(text));
        }
        std::size_t used = 0;
        const unsigned long v = std::stoul(text, &used);
        if (used != text.size()) throw DataError("trailing characters");
        return MaxFeatures::from_count(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
        throw UsageError("--max-features expects a fraction like 0.5 or an integer count, got '" +
                         text + "'");
    }
}

struct HyperFlags {
    std::optional<std::uint32_t> trees;
    std::optional<std::string> max_features;
    std::optional<std::uint32_t> pairs;
    std::optional<std::int64_t> max_depth;
    std::optional<std::uint32_t> min_split;
    std::optional<std::uint32_t> min_leaf;
    std::optional<std::uint64_t> seed;
    std::optional<bool> fast_path;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--trees", trees, "Number of trees (default 100)");
        cmd->add_option("--max-features", max_features,
                        "Candidate features per node: fraction of p (e.g. 0.5) or count "
                        "(default 0.5)");
        cmd->add_option("--pairs", pairs, "Exemplar pairs per feature (default 1)");
        cmd->add_option("--max-depth", max_depth, "Depth limit (default: unlimited)");
        cmd->add_option("--min-split", min_split, "Minimum node size to split (default 2)");
        cmd->add_option("--min-leaf", min_leaf, "Minimum leaf size (default 1)");
        cmd->add_option("--seed", seed, "Random seed (default 42)");
        cmd->add_option("--fast-path", fast_path,
                        "Use the closed-form numeric projection (default true)");
    }

    void merge_config(const json& cfg) {
        merge(cfg, "trees", trees);
        merge(cfg, "max-features", max_features);
        merge(cfg, "pairs", pairs);
        merge(cfg, "max-depth", max_depth);
        merge(cfg, "min-split", min_split);
        merge(cfg, "min-leaf", min_leaf);
        merge(cfg, "seed", seed);
        merge(cfg, "fast-path", fast_path);
    }

    Hyperparams resolve() const {
        Hyperparams hp;
        if (trees) hp.max_trees = *trees;
        if (max_features) hp.max_features = parse_max_features(*max_features);
        if (pairs) hp.max_pairs = *pairs;
        if (max_depth) {
            if (*max_depth < 0) throw UsageError("--max-depth must be >= 0");
            hp.stopping.max_depth = static_cast<std::uint32_t>(*max_depth);
        }
        if (min_split) hp.stopping.min_samples_split = *min_split;
        if (min_leaf) hp.stopping.min_samples_leaf = *min_leaf;
        if (seed) hp.seed = *seed;
        if (fast_path) hp.numeric_fast_path = *fast_path;
        return hp;
    }
};

int run_generate(const std::optional<std::string>& mode, const std::optional<std::string>& out,
                 const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& n,
                 const std::optional<std::size_t>& vocab,
                 const std::optional<double>& mean_length,
                 const std::optional<double>& mean_set_size, const std::optional<bool>& bag) {
    if (!mode) throw UsageError("generate: --mode is required");
    if (!out) throw UsageError("generate: --out is required");
    SynthConfig cfg;
    cfg.mode = parse_synth_mode(*mode);
    if (seed) cfg.seed = *seed;
    if (n) cfg.n_examples = *n;
    if (vocab) cfg.vocab_size = *vocab;
    if (mean_length) cfg.mean_length = *mean_length;
    if (mean_set_size) cfg.mean_set_size = *mean_set_size;

    Dataset ds = generate(cfg);
    if (bag.value_or(false)) ds = bag_of_items(ds, 0);
    const auto manifest = save_dataset(ds, *out);

    // record the generating configuration so the dataset is reproducible
    // from its own files
    std::ifstream in(manifest, std::ios::binary);
    json m = json::parse(in);
    in.close();
    m["meta"] = {{"generator", "rsf generate"},
                 {"mode", synth_mode_name(cfg.mode)},
                 {"seed", cfg.seed},
                 {"n", cfg.n_examples},
                 {"vocab", cfg.vocab_size},
                 {"mean_length", cfg.mean_length},
                 {"mean_set_size", cfg.mean_set_size},
                 {"bag", bag.value_or(false)}};
    std::ofstream rewritten(manifest, std::ios::binary);
    rewritten << m.dump(2) << "\n";

    log_info("generated " + std::to_string(ds.n_examples()) + " examples, " +
             std::to_string(ds.n_features()) + " columns");
    std::cout << manifest.string() << "\n";
    return 0;
}

int run_fit(const std::optional<std::string>& data, const std::optional<std::string>& out,
            const HyperFlags& flags, const std::optional<unsigned>& workers) {
    if (!data) throw UsageError("fit: --data is required");
    if (!out) throw UsageError("fit: --out is required");
    const Hyperparams hp = flags.resolve();
    const Dataset ds = load_manifest(*data);
    log_info("fitting " + std::to_string(hp.max_trees) + " trees on n=" +
             std::to_string(ds.n_examples()) + " p=" + std::to_string(ds.n_features()));
    const ForestModel model = fit(ds, hp, workers.value_or(1));
    save_model(model, *out);
    log_info("model written to " + *out);
    return 0;
}

int run_predict(const std::optional<std::string>& model_path,
                const std::optional<std::string>& data, const std::optional<std::string>& out) {
    if (!model_path) throw UsageError("predict: --model is required");
    if (!data) throw UsageError("predict: --data is required");
    if (!out) throw UsageError("predict: --out is required");
    const ForestModel model = load_model(*model_path);
    const Dataset ds = load_manifest(*data);
    const auto proba = predict_proba(model, ds);

    std::string csv = "example_index,p_negative,p_positive,predicted\n";
    for (std::size_t i = 0; i < proba.size(); ++i) {
        const auto& p = proba[i];
        csv += std::to_string(i) + "," + format_double(p[0]) + "," + format_double(p[1]) + "," +
               model.class_values[p[1] > p[0] ? 1 : 0] + "\n";
    }
    std::ofstream file(*out, std::ios::binary);
    if (!file) throw FormatError("cannot open '" + *out + "' for writing");
    file << csv;
    log_info("predictions written to " + *out);
    return 0;
}

int run_cv(const std::optional<std::string>& data, const std::optional<std::string>& out,
           const HyperFlags& flags, const std::optional<std::uint32_t>& reps,
           const std::optional<std::uint32_t>& folds, const std::optional<unsigned>& workers,
           const std::optional<std::string>& name) {
    if (!data) throw UsageError("cv: --data is required");
    const Hyperparams hp = flags.resolve();
    const std::uint32_t r = reps.value_or(10);
    const std::uint32_t k = folds.value_or(2);
    const Dataset ds = load_manifest(*data);

    EvalReport report = repeated_cv(ds, hp, r, k, hp.seed, workers.value_or(1));
    report.dataset = name.value_or(*data);

    if (out) {
        std::ofstream file(*out, std::ios::binary);
        if (!file) throw FormatError("cannot open '" + *out + "' for writing");
        file << report_to_json(report);
        log_info("report written to " + *out);
    }
    std::cout << render_report(report);
    return 0;
}

}  // namespace

std::string render_report(const EvalReport& report) {
    std::ostringstream config;
    config << "trees=" << report.hyperparams.max_trees << " max_features=";
    if (report.hyperparams.max_features.is_fraction) {
        config << report.hyperparams.max_features.fraction << "p";
    } else {
        config << report.hyperparams.max_features.count;
    }
    config << " pairs=" << report.hyperparams.max_pairs << " seed=" << report.seed;

    std::ostringstream table;
    table << std::left << std::setw(24) << "dataset" << std::setw(44) << "config" << std::setw(18)
          << "mean_auc +/- std" << std::setw(6) << "folds" << "\n";
    std::ostringstream auc;
    auc << std::fixed << std::setprecision(4) << report.mean_auc << " +/- " << std::setprecision(4)
        << report.std_auc;
    table << std::left << std::setw(24)
          << (report.dataset.empty() ? std::string("<unnamed>") : report.dataset) << std::setw(44)
          << config.str() << std::setw(18) << auc.str() << std::setw(6)
          << report.fold_aucs.size() << "\n";
    return table.str();
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Random similarity forest toolkit: mixed-type classification with "
                 "per-feature distance measures"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name

    std::optional<std::string> config_path;
    app.add_option("--config", config_path,
                   "JSON file with defaults for any flag (flags take precedence)");

    auto* generate_cmd = app.add_subcommand("generate", "Emit a synthetic set-sequence dataset");
    std::optional<std::string> gen_mode, gen_out;
    std::optional<std::uint64_t> gen_seed;
    std::optional<std::size_t> gen_n, gen_vocab;
    std::optional<double> gen_mean_length, gen_mean_set_size;
    std::optional<bool> gen_bag;
    generate_cmd->add_option("--mode", gen_mode, "items | lengths | order");
    generate_cmd->add_option("--out", gen_out, "Output directory for the manifest dataset");
    generate_cmd->add_option("--seed", gen_seed, "Random seed (default 42)");
    generate_cmd->add_option("--n", gen_n, "Number of examples, even (default 400)");
    generate_cmd->add_option("--vocab", gen_vocab, "Vocabulary size (default 50)");
    generate_cmd->add_option("--mean-length", gen_mean_length, "Mean sequence length (default 20)");
    generate_cmd->add_option("--mean-set-size", gen_mean_set_size, "Mean set size (default 20)");
    generate_cmd->add_flag("--bag", gen_bag, "Emit the bag-of-items numeric transform instead");

    auto* fit_cmd = app.add_subcommand("fit", "Train a forest on a manifest dataset");
    std::optional<std::string> fit_data, fit_out;
    std::optional<unsigned> fit_workers;
    HyperFlags fit_flags;
    fit_cmd->add_option("--data", fit_data, "Manifest path");
    fit_cmd->add_option("--out", fit_out, "Model output path (JSON)");
    fit_flags.add_options(fit_cmd);
    fit_cmd->add_option("--workers", fit_workers, "Tree-building threads (default 1)");

    auto* predict_cmd = app.add_subcommand("predict", "Score a dataset with a trained model");
    std::optional<std::string> pred_model, pred_data, pred_out;
    predict_cmd->add_option("--model", pred_model, "Model path");
    predict_cmd->add_option("--data", pred_data, "Manifest path");
    predict_cmd->add_option("--out", pred_out, "Prediction CSV output path");

    auto* cv_cmd = app.add_subcommand("cv", "Repeated stratified k-fold cross-validation");
    std::optional<std::string> cv_data, cv_out, cv_name;
    std::optional<std::uint32_t> cv_reps, cv_folds;
    std::optional<unsigned> cv_workers;
    HyperFlags cv_flags;
    cv_cmd->add_option("--data", cv_data, "Manifest path");
    cv_cmd->add_option("--reps", cv_reps, "Repetitions (default 10)");
    cv_cmd->add_option("--folds", cv_folds, "Folds per repetition (default 2)");
    cv_cmd->add_option("--out", cv_out, "Report JSON output path");
    cv_flags.add_options(cv_cmd);
    cv_cmd->add_option("--workers", cv_workers, "Tree-building threads (default 1)");
    cv_cmd->add_option("--name", cv_name, "Dataset label used in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        json cfg = json::object();
        if (config_path) cfg = load_config(*config_path);

        if (app.got_subcommand(generate_cmd)) {
            merge(cfg, "mode", gen_mode);
            merge(cfg, "out", gen_out);
            merge(cfg, "seed", gen_seed);
            merge(cfg, "n", gen_n);
            merge(cfg, "vocab", gen_vocab);
            merge(cfg, "mean-length", gen_mean_length);
            merge(cfg, "mean-set-size", gen_mean_set_size);
            merge(cfg, "bag", gen_bag);
            return run_generate(gen_mode, gen_out, gen_seed, gen_n, gen_vocab, gen_mean_length,
                                gen_mean_set_size, gen_bag);
        }
        if (app.got_subcommand(fit_cmd)) {
            merge(cfg, "data", fit_data);
            merge(cfg, "out", fit_out);
            merge(cfg, "workers", fit_workers);
            fit_flags.merge_config(cfg);
            return run_fit(fit_data, fit_out, fit_flags, fit_workers);
        }
        if (app.got_subcommand(predict_cmd)) {
            merge(cfg, "model", pred_model);
            merge(cfg, "data", pred_data);
            merge(cfg, "out", pred_out);
            return run_predict(pred_model, pred_data, pred_out);
        }
        if (app.got_subcommand(cv_cmd)) {
            merge(cfg, "data", cv_data);
            merge(cfg, "out", cv_out);
            merge(cfg, "reps", cv_reps);
            merge(cfg, "folds", cv_folds);
            merge(cfg, "workers", cv_workers);
            merge(cfg, "name", cv_name);
            cv_flags.merge_config(cfg);
            return run_cv(cv_data, cv_out, cv_flags, cv_reps, cv_folds, cv_workers, cv_name);
        }
        throw Error("no command selected");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace rsf::cli
