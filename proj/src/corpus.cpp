#include "ludemic/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ludemic/error.hpp"

namespace ludemic {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string file_stem(const std::string& game) {
  std::string out;
  for (char c : game) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<ManifestEntry> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) {
      throw Error(ErrorCode::MalformedCsv, path.string() + ":" + std::to_string(number) + ": expected name,players,file");
    }
    ManifestEntry entry;
    entry.name = fields[0];
    try {
      entry.players = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedCsv, path.string() + ":" + std::to_string(number) + ": bad player count");
    }
    entry.file = fields[2];
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<CorpusGame> load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "corpus directory not found: " + dir.string());

  std::vector<CorpusGame> games;
  const fs::path manifest = dir / kManifestName;
  if (fs::exists(manifest)) {
    for (const ManifestEntry& e : read_manifest(manifest)) {
      CorpusGame g;
      g.file = e.file;
      g.name = e.name;
      g.expected_players = e.players;
      games.push_back(std::move(g));
    }
  } else {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".gdl") files.push_back(entry.path().filename().string());
    std::sort(files.begin(), files.end());
    for (auto& f : files) {
      CorpusGame g;
      g.file = f;
      games.push_back(std::move(g));
    }
  }
  if (games.empty()) throw Error(ErrorCode::Io, "no games in corpus " + dir.string());

  for (CorpusGame& g : games) {
    try {
      g.tree = gdl::parse(read_file(dir / g.file));
      if (!g.tree->children.empty() && g.tree->children[0].kind == gdl::NodeKind::String) g.name = g.tree->children[0].text;
    } catch (const Error& e) {
      g.diagnostic = e.what();
      continue;
    }
    try {
      g.spec = compile(*g.tree);
      if (g.expected_players && *g.expected_players != g.spec->players) {
        g.diagnostic = "manifest says " + std::to_string(*g.expected_players) + " players, description says " +
                       std::to_string(g.spec->players);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnsupportedLudeme) {
        g.parse_only = true;
        g.unsupported = e.detail();
      } else {
        g.diagnostic = e.what();
      }
    }
  }
  return games;
}

}  // namespace ludemic
