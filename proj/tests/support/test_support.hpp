// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "fd/fdset.hpp"
#include "sem/structure.hpp"

namespace hypc::test {

std::string fixture_path(const std::string& rel);
std::string read_file(const std::string& path);
FDSet load_fds(const std::string& rel);
Structure load_structure(const std::string& rel);

// Fresh empty directory under the system temp directory, unique per process.
std::filesystem::path scratch_dir(const std::string& tag);

// Writes text to a file, creating parent directories.
void write_file(const std::filesystem::path& p, const std::string& text);

// FD set from inline text, e.g. fds("A -> B\nB -> C").
FDSet fds(const std::string& text);

// Seed from HYPC_SEED when set, otherwise a fixed default.
std::uint64_t base_seed();
std::mt19937_64 rng_for(std::uint64_t salt);

// Random parsimonious FD set over 2..max_attrs single-letter attributes.
FDSet random_parsimonious(std::mt19937_64& rng, std::size_t max_attrs);

// Random FD set (not necessarily canonical) over n attributes.
FDSet random_fdset(std::mt19937_64& rng, std::size_t n_attrs, std::size_t n_fds);

// Random complete structure with n equations satisfying the Hall condition.
Structure random_structure(std::mt19937_64& rng, std::size_t n, double density, bool with_domain);

}  // namespace hypc::test
