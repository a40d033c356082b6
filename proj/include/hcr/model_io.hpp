#ifndef HCR_MODEL_IO_HPP
#define HCR_MODEL_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "hcr/regression.hpp"

namespace hcr {

inline constexpr int kModelFormatVersion = 1;

/// Writes the model as JSON text, one top-level member per line. Doubles use
/// the shortest round-trip representation, so save -> load -> save is
/// byte-identical and every coefficient is restored bit-exactly.
void save_model(std::ostream& out, const TrainedModel& model);
void save_model(const std::filesystem::path& path, const TrainedModel& model);

TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace hcr

#endif  // HCR_MODEL_IO_HPP
