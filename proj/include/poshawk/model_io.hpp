#pragma once

#include <cstdint>
#include <string>

#include "poshawk/covariates.hpp"
#include "poshawk/intensity.hpp"

namespace poshawk {

/// FNV-1a over the canonical events CSV; recorded in the model file so a
/// model can be matched to the data it was fitted on.
std::uint64_t dataset_fingerprint(const Dataset& ds, const CivilDateTime& epoch,
                                  const TimeZoneOffset& zone);

/// Versioned flat-text model document. Numeric fields round-trip at full
/// precision.
struct ModelFile {
    int version = 1;
    HawkesModel model;
    CivilDateTime epoch;
    TimeZoneOffset zone;
    PhatContributors contributors = PhatContributors::History;
    std::uint64_t fingerprint = 0;

    std::string serialize() const;
    static ModelFile deserialize(const std::string& text);
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace poshawk
