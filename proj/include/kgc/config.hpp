#pragma once
// Run configuration as flat key=value text. One canonical serialization
// (fixed key order, shortest round-trip numbers) is used for config echo,
// config files, and the text block embedded in checkpoints.

#include <cstdint>
#include <string>
#include <vector>

#include "kgc/trainer.hpp"

namespace kgc {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(const std::string& text, const std::string& what);
uint64_t parse_u64(const std::string& text, const std::string& what);
uint32_t parse_u32(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

std::string scorer_name(ScorerKind k);
ScorerKind scorer_from(const std::string& name);
std::string composition_name(Composition c);
Composition composition_from(const std::string& name);
std::string activation_name(Activation a);
Activation activation_from(const std::string& name);

// key=value lines in canonical order, one per key.
std::string train_config_text(const TrainConfig& c);

// Applies one key. Returns false when the key is not a training key;
// throws ConfigError when the key is known but the value does not parse.
bool apply_train_key(TrainConfig& c, const std::string& key,
                     const std::string& value);

struct RunConfig {
    TrainConfig train;

    // ConfigError on unknown key, naming it.
    void apply(const std::string& key, const std::string& value);
    // "key=value" as given on the command line.
    void apply_set(const std::string& assignment);
    // key=value lines; '#' comments and blank lines are ignored.
    void apply_file(const std::string& path);

    static RunConfig preset(const std::string& name);  // ConfigError if unknown
    static std::vector<std::string> preset_names();

    std::string echo() const { return train_config_text(train); }
};

}  // namespace kgc
