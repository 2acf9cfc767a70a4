#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ludemic/engine.hpp"
#include "ludemic/gdl.hpp"

namespace ludemic {

/// One line of `manifest.txt`: `name,players,file`.
struct ManifestEntry {
  std::string name;
  int players = 0;
  std::string file;
};

inline constexpr const char* kManifestName = "manifest.txt";

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct CorpusGame {
  std::string file;                    // relative to the corpus directory
  std::string name;                    // from the description, else the manifest
  std::optional<int> expected_players;  // manifest value
  std::optional<gdl::LudemeTree> tree;
  std::optional<GameSpec> spec;
  /// Parses but uses ludemes outside the engine subset.
  bool parse_only = false;
  std::string unsupported;  // first unsupported ludeme when parse_only
  std::string diagnostic;   // failure description, empty when fine

  bool ok() const { return tree.has_value() && (spec.has_value() || parse_only) && diagnostic.empty(); }
};

/// Loads the games listed in the corpus manifest, or every `*.gdl` file in
/// name order when there is no manifest. Per-game problems are recorded in
/// `diagnostic`; an empty or missing directory throws Io.
std::vector<CorpusGame> load_corpus(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// File-system friendly form of a game name.
std::string file_stem(const std::string& game);

}  // namespace ludemic
