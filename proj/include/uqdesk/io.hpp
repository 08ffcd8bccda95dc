#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "uqdesk/data.hpp"

namespace uqdesk::io {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Strict full-field parse. Throws Error(ParseError).
double parse_double(std::string_view s);

// Dataset CSV: id,x0..x{d-1},y[,group][,true_sigma]
void write_dataset_csv(std::ostream& os, const LabeledDataset& d);
LabeledDataset read_dataset_csv(std::istream& is);

// Prediction CSV: id,y_true,y_pred,sigma[,group]
void write_predictions_csv(std::ostream& os, const PredictionSet& p);
PredictionSet read_predictions_csv(std::istream& is);

std::string read_file(const std::filesystem::path& path);
/// Writes via a sibling temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

LabeledDataset load_dataset(const std::filesystem::path& path);
PredictionSet load_predictions(const std::filesystem::path& path);

}  // namespace uqdesk::io
