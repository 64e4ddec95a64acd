#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jsrcert/pairs.hpp"
#include "jsrcert/sampling.hpp"
#include "jsrcert/system.hpp"

namespace jsrcert {

// System file (JSON object):
//   {"n": int, "M": int, "p": int,
//    "A": [M arrays of n*n reals, row-major],
//    "C": [M arrays of p*n reals, row-major]}
// Unknown extra keys are ignored on load.
SwitchedLinearSystem load_system(const std::string& path);
void save_system(const SwitchedLinearSystem& sys, const std::string& path);

// Trajectory file (JSON Lines): a header line
//   {"n":., "M":., "p":., "T":., "N":., "seed":.}
// followed by N records {"i":., "x0":[n]|null, "word":[T]|null, "y":[T x p]}.
// Null x0/word marks externally produced (black-box) data.
SampleSet load_trajectories(const std::string& path);
void save_trajectories(const SampleSet& set, const std::string& path,
                       bool strip_provenance = false);

// Pair file (JSON Lines): a header line
//   {"n":., "M":., "p":., "k":., "T":., "N":., "seed":.}
// followed by records {"v":[k*p], "z":[k*p]}.
DataPairSet load_pairs(const std::string& path);
void save_pairs(const DataPairSet& pairs, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Non-cryptographic audit hash of a file's bytes (FNV-1a, 64 bit), rendered
// as "fnv1a64:" + 16 hex digits. Used to pin report inputs, not security.
std::string file_content_hash(const std::string& path);

}  // namespace jsrcert
