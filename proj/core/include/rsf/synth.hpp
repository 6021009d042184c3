#pragma once

#include <cstdint>
#include <string>

#include "rsf/dataset.hpp"
#include "rsf/forest.hpp"

namespace rsf {

// What separates the two classes: the item distribution, the sequence
// lengths, or only the order of sets within each sequence.
enum class SynthMode { Items, Lengths, Order };

const char* synth_mode_name(SynthMode mode);
SynthMode parse_synth_mode(const std::string& name);

struct SynthConfig {
    std::size_t n_examples = 400;  // must be even; classes are balanced
    std::size_t vocab_size = 50;
    double mean_length = 20.0;    // Poisson mean, clamped to >= 1
    double mean_set_size = 20.0;  // Poisson mean, clamped to [1, vocab_size]
    SynthMode mode = SynthMode::Items;
    std::uint64_t seed = kDefaultSeed;
};

// Balanced binary dataset with one set-sequence column ("sequence",
// measure "editjaccard") and labels "class0" / "class1". Deterministic in
// cfg.seed.
Dataset generate(const SynthConfig& cfg);

// Replaces a set-sequence column by one numeric count column per distinct
// item (measure "euclidean"): an order-invariant representation.
Dataset bag_of_items(const Dataset& ds, std::size_t column);

}  // namespace rsf
