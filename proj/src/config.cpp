#include "kgc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kgc/errors.hpp"

namespace kgc {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("invalid number for " + what + ": '" + text + "'");
    }
    return v;
}

uint64_t parse_u64(const std::string& text, const std::string& what) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("invalid integer for " + what + ": '" + text + "'");
    }
    return v;
}

uint32_t parse_u32(const std::string& text, const std::string& what) {
    const uint64_t v = parse_u64(text, what);
    if (v > 0xffffffffull) throw ConfigError(what + " out of range: '" + text + "'");
    return static_cast<uint32_t>(v);
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("invalid boolean for " + what + ": '" + text + "'");
}

std::string scorer_name(ScorerKind k) {
    return k == ScorerKind::transe ? "transe" : "distmult";
}

ScorerKind scorer_from(const std::string& name) {
    if (name == "transe") return ScorerKind::transe;
    if (name == "distmult") return ScorerKind::distmult;
    throw ConfigError("unknown model: '" + name + "' (expected transe|distmult)");
}

std::string composition_name(Composition c) {
    switch (c) {
        case Composition::sum: return "sum";
        case Composition::concat: return "concat";
        case Composition::mult: return "mult";
        case Composition::corr: return "corr";
        case Composition::central_only: return "central_only";
        case Composition::entity_only: return "entity_only";
    }
    return "?";
}

Composition composition_from(const std::string& name) {
    if (name == "sum") return Composition::sum;
    if (name == "concat") return Composition::concat;
    if (name == "mult") return Composition::mult;
    if (name == "corr") return Composition::corr;
    if (name == "central_only") return Composition::central_only;
    if (name == "entity_only") return Composition::entity_only;
    throw ConfigError("unknown composition: '" + name +
                      "' (expected sum|concat|mult|corr|central_only|entity_only)");
}

std::string activation_name(Activation a) {
    return a == Activation::relu ? "relu" : "tanh";
}

Activation activation_from(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh_act;
    throw ConfigError("unknown activation: '" + name + "' (expected relu|tanh)");
}

std::string train_config_text(const TrainConfig& c) {
    std::ostringstream out;
    out << "model=" << scorer_name(c.scorer) << "\n";
    out << "mode=" << (c.codlr ? "codlr" : "plain") << "\n";
    out << "dim=" << c.dim << "\n";
    out << "dict_size=" << c.dict_size << "\n";
    out << "composition=" << composition_name(c.composition) << "\n";
    out << "activation=" << activation_name(c.activation) << "\n";
    out << "lambda=" << format_double(c.lambda) << "\n";
    out << "batch_size=" << c.batch_size << "\n";
    out << "learning_rate=" << format_double(c.learning_rate) << "\n";
    out << "epochs=" << c.epochs << "\n";
    out << "seed=" << c.seed << "\n";
    out << "label_smoothing=" << format_double(c.label_smoothing) << "\n";
    out << "eval_every=" << c.eval_every << "\n";
    out << "per_relation_mlp=" << (c.per_relation_mlp ? "true" : "false") << "\n";
    return out.str();
}

bool apply_train_key(TrainConfig& c, const std::string& key,
                     const std::string& value) {
    if (key == "model") {
        c.scorer = scorer_from(value);
    } else if (key == "mode") {
        if (value == "codlr") {
            c.codlr = true;
        } else if (value == "plain") {
            c.codlr = false;
        } else {
            throw ConfigError("unknown mode: '" + value + "' (expected codlr|plain)");
        }
    } else if (key == "dim") {
        c.dim = parse_u32(value, key);
    } else if (key == "dict_size") {
        c.dict_size = parse_u32(value, key);
    } else if (key == "composition") {
        c.composition = composition_from(value);
    } else if (key == "activation") {
        c.activation = activation_from(value);
    } else if (key == "lambda") {
        c.lambda = parse_double(value, key);
    } else if (key == "batch_size") {
        c.batch_size = parse_u32(value, key);
    } else if (key == "learning_rate") {
        c.learning_rate = parse_double(value, key);
    } else if (key == "epochs") {
        c.epochs = parse_u32(value, key);
    } else if (key == "seed") {
        c.seed = parse_u64(value, key);
    } else if (key == "label_smoothing") {
        c.label_smoothing = parse_double(value, key);
    } else if (key == "eval_every") {
        c.eval_every = parse_u32(value, key);
    } else if (key == "per_relation_mlp") {
        c.per_relation_mlp = parse_bool(value, key);
    } else {
        return false;
    }
    return true;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (!apply_train_key(train, key, value)) {
        throw ConfigError("unknown config key: '" + key + "'");
    }
}

void RunConfig::apply_set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("expected key=value, got '" + assignment + "'");
    }
    apply(assignment.substr(0, eq), assignment.substr(eq + 1));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value");
        }
        apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

namespace {

struct Preset {
    const char* name;
    const char* text;
};

// One per reported headline configuration.
constexpr Preset kPresets[] = {
    {"codlr-transe-fb15k237",
     "model=transe\nmode=codlr\ndim=100\ncomposition=sum\ndict_size=7\n"
     "lambda=0.001\nbatch_size=256\nlearning_rate=0.001\nepochs=400\n"},
    {"codlr-distmult-fb15k237",
     "model=distmult\nmode=codlr\ndim=200\ncomposition=corr\ndict_size=5\n"
     "lambda=0.1\nbatch_size=1024\nlearning_rate=0.00015\nepochs=400\n"},
    {"codlr-transe-wn18rr",
     "model=transe\nmode=codlr\ndim=100\ncomposition=corr\ndict_size=5\n"
     "lambda=0.01\nbatch_size=128\nlearning_rate=0.00018\nepochs=400\n"},
    {"codlr-distmult-wn18rr",
     "model=distmult\nmode=codlr\ndim=500\ncomposition=mult\ndict_size=3\n"
     "lambda=0.000005\nbatch_size=16\nlearning_rate=0.0002\nepochs=120\n"},
};

}  // namespace

RunConfig RunConfig::preset(const std::string& name) {
    for (const Preset& p : kPresets) {
        if (name == p.name) {
            RunConfig cfg;
            std::istringstream in(p.text);
            std::string line;
            while (std::getline(in, line)) {
                const auto eq = line.find('=');
                cfg.apply(line.substr(0, eq), line.substr(eq + 1));
            }
            return cfg;
        }
    }
    std::string known;
    for (const Preset& p : kPresets) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw ConfigError("unknown preset: '" + name + "' (available: " + known + ")");
}

std::vector<std::string> RunConfig::preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : kPresets) names.emplace_back(p.name);
    return names;
}

}  // namespace kgc
