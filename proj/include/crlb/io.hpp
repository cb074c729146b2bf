#pragma once

#include "crlb/features.hpp"
#include "crlb/synthgen.hpp"

#include <string>

namespace crlb {

// "%.17g" — shortest text that round-trips an IEEE double through stod.
std::string format_double(double v);

// Dataset CSV layout: header "block,role,c0,...,c{D-1}"; per block one row
// for x, one for xp, then xn_1..xn_k. Round-trips exactly.
void write_dataset_csv(const ContrastiveDataset& dataset, const std::string& path);
ContrastiveDataset read_dataset_csv(const std::string& path);

// Checkpoint: small binary header (variant, constraint, budgets, radius) plus
// flat little-endian doubles per matrix; read(write(f)) is bit-exact.
void write_checkpoint(const FeatureMap& f, const std::string& path);
FeatureMap read_checkpoint(const std::string& path);

// Human-readable export: one "matrix,row,col,value" line per entry.
void export_checkpoint_csv(const FeatureMap& f, const std::string& path);

}  // namespace crlb
