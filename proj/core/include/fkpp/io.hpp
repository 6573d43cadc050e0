#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fkpp/continuation.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/grid.hpp"

namespace fkpp::io {

/// All numeric output uses 17 significant digits so files round-trip doubles
/// exactly; files are written to a temporary name and renamed into place.

std::string format_double(double v);

void write_profile_csv(const std::filesystem::path& path, const Grid& g, const Profile& u);

struct ProfileFile {
    std::vector<double> x;
    std::vector<double> u;
};
ProfileFile read_profile_csv(const std::filesystem::path& path);

/// Linear interpolation of a stored profile onto a target grid.
Profile resample(const ProfileFile& f, const Grid& g);

void write_branch_csv(const std::filesystem::path& path, const Branch& b);

/// Metadata sidecar: D, bc, N, continuation options, stall reason, folds.
void write_branch_meta_json(const std::filesystem::path& path, const Branch& b);

/// One row per annotated branch point: index, sigma_1..sigma_k.
void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<int, std::vector<double>>>& spectra);

struct ValidationRecord {
    std::string quantity;
    double numeric = 0.0;
    double oracle = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

void write_validation_report(const std::filesystem::path& path,
                             const std::vector<ValidationRecord>& records);

void write_text_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace fkpp::io
