#include "crlb/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crlb {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class KeyValues {
  public:
    explicit KeyValues(const std::string& text) {
        std::istringstream stream(text);
        std::string line;
        int line_no = 0;
        while (std::getline(stream, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) +
                                               ": empty key");
            if (entries_.count(key))
                throw ConfigError("config: duplicate key '" + key + "'");
            entries_[key] = value;
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        return parse_double(key, it->second);
    }

    long long get_int(const std::string& key, long long fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        return parse_int(key, it->second);
    }

    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        std::vector<int> out;
        for (const std::string& piece : split_commas(it->second))
            out.push_back(static_cast<int>(parse_int(key, piece)));
        return out;
    }

    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        std::vector<double> out;
        for (const std::string& piece : split_commas(it->second))
            out.push_back(parse_double(key, piece));
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : entries_)
            if (!consumed_.count(key))
                throw ConfigError("config: unknown key '" + key + "'");
    }

  private:
    static std::vector<std::string> split_commas(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream stream(s);
        std::string piece;
        while (std::getline(stream, piece, ',')) {
            piece = trim(piece);
            if (!piece.empty()) out.push_back(piece);
        }
        return out;
    }

    static double parse_double(const std::string& key, const std::string& value) {
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' has non-numeric value '" + value + "'");
        }
    }

    static long long parse_int(const std::string& key, const std::string& value) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' has non-integer value '" + value + "'");
        }
    }

    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

MatrixNormKind constraint_from_string(const std::string& name) {
    if (name == "l2p") return MatrixNormKind::MixedL2p;
    if (name == "schatten") return MatrixNormKind::SchattenP;
    throw ConfigError("config: unknown constraint '" + name + "' (l2p | schatten)");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    KeyValues kv(text);
    ExperimentConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", 42));
    cfg.loss = loss_from_string(kv.get_string("loss", "logistic"));

    cfg.model.classes = static_cast<int>(kv.get_int("model.classes", 2));
    cfg.model.dim = static_cast<int>(kv.get_int("model.dim", 2));
    cfg.model.sigma = kv.get_double("model.sigma", 0.5);
    cfg.model.means = kv.get_string("model.means", "sphere");
    cfg.model.means_file = kv.get_string("model.means_file", "");

    cfg.n = static_cast<int>(kv.get_int("data.n", 100));
    cfg.k_grid = kv.get_int_list("data.k", {4});
    if (cfg.k_grid.empty()) throw ConfigError("config: data.k must list at least one value");
    for (std::size_t i = 1; i < cfg.k_grid.size(); ++i)
        if (cfg.k_grid[i] <= cfg.k_grid[i - 1])
            throw ConfigError("config: data.k grid must be strictly increasing");

    cfg.feature.kind = kv.get_string("feature.kind", "linear");
    if (cfg.feature.kind != "linear" && cfg.feature.kind != "mlp")
        throw ConfigError("config: feature.kind must be linear or mlp");
    cfg.feature.constraint = constraint_from_string(kv.get_string("feature.constraint", "l2p"));
    cfg.feature.p = kv.get_double("feature.p", 2.0);
    cfg.feature.lambda = kv.get_double("feature.lambda", 1.0);
    cfg.feature.dim = static_cast<int>(kv.get_int("feature.dim", 2));
    cfg.feature.radius = kv.get_double("feature.radius", 1.0);
    cfg.feature.widths = kv.get_int_list("feature.widths", {});
    cfg.feature.budgets = kv.get_double_list("feature.budgets", {});
    if (cfg.feature.kind == "mlp") {
        if (cfg.feature.widths.empty())
            throw ConfigError("config: feature.widths required for mlp maps");
        if (cfg.feature.budgets.size() != cfg.feature.widths.size())
            throw ConfigError("config: feature.budgets must match feature.widths");
    }

    cfg.train.steps = static_cast<int>(kv.get_int("train.steps", 200));
    cfg.train.step_size = kv.get_double("train.step_size", 0.5);
    cfg.train.schedule = schedule_from_string(kv.get_string("train.schedule", "invsqrt"));
    cfg.train.restarts = static_cast<int>(kv.get_int("train.restarts", 1));
    cfg.train.batch = static_cast<int>(kv.get_int("train.batch", 0));

    cfg.mc.sign_draws = static_cast<int>(kv.get_int("mc.sign_draws", 200));
    cfg.mc.pop_draws = static_cast<int>(kv.get_int("mc.pop_draws", 2000));
    cfg.mc.mean_reps = static_cast<int>(kv.get_int("mc.mean_reps", 10000));

    cfg.delta = kv.get_double("bounds.delta", 0.05);
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw ConfigError("config: bounds.delta must lie in (0,1)");

    kv.reject_unknown();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

LatentClassModel model_from_config(const ModelConfig& cfg, std::uint64_t seed) {
    LatentClassModel model;
    model.prior = VectorXd::Constant(cfg.classes, 1.0 / cfg.classes);
    model.noise_scale = cfg.sigma;
    if (!cfg.means_file.empty()) {
        std::ifstream in(cfg.means_file);
        if (!in) throw ConfigError("config: cannot open means file '" + cfg.means_file + "'");
        model.class_means = MatrixXd::Zero(cfg.classes, cfg.dim);
        std::string line;
        int row = 0;
        while (std::getline(in, line) && row < cfg.classes) {
            std::istringstream ls(line);
            std::string cell;
            int col = 0;
            while (std::getline(ls, cell, ',') && col < cfg.dim)
                model.class_means(row, col++) = std::stod(cell);
            if (col != cfg.dim)
                throw ConfigError("config: means file row with wrong column count");
            ++row;
        }
        if (row != cfg.classes) throw ConfigError("config: means file has too few rows");
    } else {
        model.class_means = preset_means(cfg.means, cfg.classes, cfg.dim, seed);
    }
    model.validate();
    return model;
}

FeatureMap feature_prototype(const FeatureConfig& cfg, int data_dim, bool with_radius) {
    std::optional<double> radius;
    if (with_radius) radius = cfg.radius;
    if (cfg.kind == "linear")
        return make_linear_map(MatrixXd::Zero(cfg.dim, data_dim), cfg.constraint, cfg.p,
                               cfg.lambda, radius);
    std::vector<MatrixXd> layers;
    int prev = data_dim;
    for (int w : cfg.widths) {
        layers.push_back(MatrixXd::Zero(w, prev));
        prev = w;
    }
    return make_mlp_map(std::move(layers), cfg.budgets, MatrixXd::Zero(cfg.dim, prev),
                        cfg.lambda, radius);
}

FeatureMap initial_map(const FeatureConfig& cfg, int data_dim, std::uint64_t seed) {
    Rng rng(derive_seed(seed, seedtag::kInit));
    return random_member(feature_prototype(cfg, data_dim), rng);
}

}  // namespace crlb
