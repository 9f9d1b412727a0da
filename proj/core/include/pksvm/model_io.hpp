#ifndef PKSVM_MODEL_IO_HPP
#define PKSVM_MODEL_IO_HPP

#include <filesystem>

#include "pksvm/solver.hpp"

namespace pksvm {

/// ModelFile format version written by save_model.
inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON model file: kernel/solver parameters, bias, support
/// vectors as (mean, covariance upper triangle, label, coefficient)
/// records, and training diagnostics. Floats are serialized with
/// round-trip-exact formatting, so a reloaded model reproduces decision
/// scores bit for bit.
void save_model(const TrainedModel& model, const std::filesystem::path& path);

/// Throws ParseError on malformed files or unrecognized format versions.
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace pksvm

#endif  // PKSVM_MODEL_IO_HPP
