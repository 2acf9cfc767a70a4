#include "ludemic/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "ludemic/corpus.hpp"
#include "ludemic/error.hpp"

namespace ludemic {

FeatureMatrix build_feature_matrix(const std::vector<std::pair<std::string, gdl::LudemeTree>>& corpus) {
  FeatureMatrix m;
  std::set<std::string> seen;
  std::set<std::string> vocabulary;
  std::vector<gdl::LudemeSet> sets;
  for (const auto& [name, tree] : corpus) {
    if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateGameName, name);
    if (name.find_first_of(",\n\r") != std::string::npos) {
      throw Error(ErrorCode::MalformedCsv, "game name '" + name + "' cannot be stored in CSV");
    }
    m.games.push_back(name);
    sets.push_back(gdl::extract_ludemes(tree));
    vocabulary.insert(sets.back().begin(), sets.back().end());
  }
  m.vocabulary.assign(vocabulary.begin(), vocabulary.end());
  for (const auto& set : sets) {
    std::vector<std::uint8_t> row(m.vocabulary.size(), 0);
    for (std::size_t j = 0; j < m.vocabulary.size(); ++j) row[j] = set.count(m.vocabulary[j]) ? 1 : 0;
    m.x.push_back(std::move(row));
  }
  return m;
}

double percent_label(double win_rate) { return std::round(win_rate * 10000.0) / 100.0; }

LabeledDataset join_labels(const FeatureMatrix& features, const std::vector<TournamentRecord>& records) {
  LabeledDataset d;
  d.features = features;
  d.slots = portfolio_slots();
  d.labels.assign(d.slots.size(), std::vector<double>(features.rows(), 0.0));
  std::map<std::string, const TournamentRecord*> by_game;
  for (const auto& r : records) by_game[r.table.game] = &r;
  for (std::size_t g = 0; g < features.rows(); ++g) {
    const auto it = by_game.find(features.games[g]);
    if (it == by_game.end()) throw Error(ErrorCode::MissingResults, features.games[g]);
    std::vector<bool> filled(d.slots.size(), false);
    for (const WinRateEntry& e : it->second->table.entries) {
      const int idx = slot_index(e.entry.slot);
      if (idx < 0) continue;
      d.labels[static_cast<std::size_t>(idx)][g] = percent_label(e.win_rate());
      filled[static_cast<std::size_t>(idx)] = true;
    }
    for (std::size_t s = 0; s < filled.size(); ++s) {
      if (!filled[s]) throw Error(ErrorCode::MissingResults, features.games[g] + " lacks " + d.slots[s].label());
    }
  }
  return d;
}

LabeledDataset join_labels(const FeatureMatrix& features, const std::filesystem::path& results_dir) {
  std::vector<TournamentRecord> records;
  for (const std::string& game : features.games) {
    const auto path = results_dir / (file_stem(game) + ".json");
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingResults, game + " (" + path.string() + ")");
    records.push_back(record_from_json(read_file(path)));
    records.back().table.game = game;
  }
  return join_labels(features, records);
}

namespace {

std::string slot_column(const HeuristicSpec& s) {
  return "label:" + std::string(to_string(s.kind)) + ":" + (s.sign > 0 ? "+" : "-");
}

std::string csv(const FeatureMatrix& f, const std::vector<HeuristicSpec>& slots,
                const std::vector<std::vector<double>>& labels, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "game";
  for (const auto& l : f.vocabulary) out += "," + l;
  for (const auto& s : slots) out += "," + slot_column(s);
  out += '\n';
  char buf[32];
  for (std::size_t g = 0; g < f.rows(); ++g) {
    out += f.games[g];
    for (std::uint8_t v : f.x[g]) out += v ? ",1" : ",0";
    for (const auto& column : labels) {
      std::snprintf(buf, sizeof buf, ",%.2f", column[g]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string write_csv(const LabeledDataset& d, const std::string& comment) {
  return csv(d.features, d.slots, d.labels, comment);
}

std::string write_csv(const FeatureMatrix& f, const std::string& comment) { return csv(f, {}, {}, comment); }

LabeledDataset read_csv(const std::string& text) {
  LabeledDataset d;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  std::size_t features = 0;
  const auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(number) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line);
    if (!header) {
      if (fields.empty() || fields[0] != "game") bad("header must start with 'game'");
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const std::string& col = fields[i];
        if (col.rfind("label:", 0) == 0) {
          const auto colon = col.rfind(':');
          const auto kind = heuristic_from_string(col.substr(6, colon - 6));
          const std::string sign = col.substr(colon + 1);
          if (!kind || (sign != "+" && sign != "-") || colon <= 6) bad("bad label column '" + col + "'");
          d.slots.emplace_back(*kind, sign == "+" ? +1 : -1);
        } else {
          if (!d.slots.empty()) bad("feature column after label columns");
          d.features.vocabulary.push_back(col);
        }
      }
      features = d.features.vocabulary.size();
      d.labels.assign(d.slots.size(), {});
      header = true;
      continue;
    }
    if (fields.size() != 1 + features + d.slots.size()) bad("expected " + std::to_string(1 + features + d.slots.size()) + " fields");
    d.features.games.push_back(fields[0]);
    std::vector<std::uint8_t> row(features);
    for (std::size_t j = 0; j < features; ++j) {
      const std::string& v = fields[1 + j];
      if (v != "0" && v != "1") bad("feature values must be 0 or 1");
      row[j] = v == "1" ? 1 : 0;
    }
    d.features.x.push_back(std::move(row));
    for (std::size_t s = 0; s < d.slots.size(); ++s) {
      const std::string& v = fields[1 + features + s];
      char* end = nullptr;
      const double value = std::strtod(v.c_str(), &end);
      if (v.empty() || *end != '\0' || !std::isfinite(value)) bad("bad label '" + v + "'");
      d.labels[s].push_back(value);
    }
  }
  if (!header) throw Error(ErrorCode::MalformedCsv, "missing header");
  return d;
}

}  // namespace ludemic
