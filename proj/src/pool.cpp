#include "ftl/pool.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ftl/rng.hpp"
#include "json.hpp"

namespace ftl::pool {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_probability(const std::string& text, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": not a number: '" + text + "'");
  }
  if (pos != text.size()) throw std::invalid_argument(where + ": trailing characters in '" + text + "'");
  if (!(v >= 0.0) || !(v <= 1.0)) throw std::invalid_argument(where + ": value " + text + " outside [0, 1]");
  return v;
}

std::vector<PredictionRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open records file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty records file: " + path.string());

  const auto header = split_csv_line(line);
  bool has_confidence = false;
  if (header.size() == 3 && header[2] == "confidence") {
    has_confidence = true;
  } else if (header.size() != 2) {
    throw std::invalid_argument(path.string() +
                                ": header must be 'instance_id,correct[,confidence]'");
  }
  if (header[0] != "instance_id" || header[1] != "correct")
    throw std::invalid_argument(path.string() +
                                ": header must be 'instance_id,correct[,confidence]'");

  std::vector<PredictionRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
    PredictionRecord rec;
    rec.instance_id = fields[0];
    if (rec.instance_id.empty())
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": empty instance_id");
    if (fields[1] == "0") {
      rec.correct = 0;
    } else if (fields[1] == "1") {
      rec.correct = 1;
    } else {
      throw std::invalid_argument("invalid correctness at line " + std::to_string(line_no) +
                                  ": got '" + fields[1] + "' (expected 0 or 1) in " +
                                  path.string());
    }
    if (has_confidence && !fields[2].empty()) {
      rec.confidence = parse_probability(
          fields[2], path.string() + " line " + std::to_string(line_no) + " field confidence");
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw std::invalid_argument("no records in " + path.string());
  return records;
}

void attach_embeddings(std::vector<PredictionRecord>& records,
                       const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open embeddings file: " + path.string());

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].instance_id, i);

  std::string line;
  std::size_t line_no = 0;
  std::size_t attached = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": invalid JSON: " + e.what());
    }
    if (!row.contains("instance_id") || !row.contains("vector"))
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": rows need 'instance_id' and 'vector'");
    const auto id = row["instance_id"].get<std::string>();
    const auto it = index.find(id);
    if (it == index.end())
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": unknown instance_id '" + id + "'");
    auto& rec = records[it->second];
    if (rec.embedding.has_value())
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": duplicate embedding for '" + id + "'");
    auto vec = row["vector"].get<std::vector<double>>();
    if (vec.empty())
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": empty vector for '" + id + "'");
    rec.embedding = std::move(vec);
    ++attached;
  }
  if (attached != records.size()) {
    for (const auto& rec : records) {
      if (!rec.embedding.has_value())
        throw std::invalid_argument(path.string() + ": missing embedding for '" +
                                    rec.instance_id + "'");
    }
  }
}

// Shortest exact text for a double; pool files must round-trip bit-exactly.
std::string format_float(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool EvaluationPool::has_embeddings() const {
  return !records.empty() && records.front().embedding.has_value();
}

bool EvaluationPool::has_confidences() const {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(),
                     [](const PredictionRecord& r) { return r.confidence.has_value(); });
}

std::size_t EvaluationPool::embedding_dim() const {
  return has_embeddings() ? records.front().embedding->size() : 0;
}

EvaluationPool make_pool(std::string name, std::vector<PredictionRecord> records) {
  if (records.empty()) throw std::invalid_argument("pool must contain at least one record");

  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  const bool with_embeddings = records.front().embedding.has_value();
  const std::size_t dim = with_embeddings ? records.front().embedding->size() : 0;

  long long correct_sum = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.instance_id.empty())
      throw std::invalid_argument("record " + std::to_string(i) + ": empty instance_id");
    if (!seen.insert(rec.instance_id).second)
      throw std::invalid_argument("duplicate instance_id '" + rec.instance_id + "'");
    if (rec.correct != 0 && rec.correct != 1)
      throw std::invalid_argument("record '" + rec.instance_id + "': correct must be 0 or 1");
    if (rec.confidence.has_value() && (!(*rec.confidence >= 0.0) || !(*rec.confidence <= 1.0)))
      throw std::invalid_argument("record '" + rec.instance_id + "': confidence outside [0, 1]");
    if (rec.embedding.has_value() != with_embeddings)
      throw std::invalid_argument("record '" + rec.instance_id +
                                  "': embeddings must be present for all records or none");
    if (with_embeddings && rec.embedding->size() != dim)
      throw std::invalid_argument("record '" + rec.instance_id + "': embedding dimension " +
                                  std::to_string(rec.embedding->size()) + " != " +
                                  std::to_string(dim));
    correct_sum += rec.correct;
  }

  EvaluationPool pool;
  pool.name = std::move(name);
  pool.records = std::move(records);
  pool.ground_truth = static_cast<double>(correct_sum) / static_cast<double>(pool.records.size());
  return pool;
}

EvaluationPool load_pool(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("cannot open manifest: " + manifest_path.string());

  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(manifest_path.string() + ": invalid JSON: " + e.what());
  }
  if (!manifest.contains("records"))
    throw std::invalid_argument(manifest_path.string() + ": missing 'records' field");

  const auto base = manifest_path.parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  auto records = read_records_csv(resolve(manifest["records"].get<std::string>()));
  if (manifest.contains("embeddings") && !manifest["embeddings"].is_null()) {
    attach_embeddings(records, resolve(manifest["embeddings"].get<std::string>()));
  }
  std::string name = manifest.value("name", std::string("pool"));
  return make_pool(std::move(name), std::move(records));
}

void save_pool(const EvaluationPool& pool, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  const bool with_conf =
      std::any_of(pool.records.begin(), pool.records.end(),
                  [](const PredictionRecord& r) { return r.confidence.has_value(); });

  {
    std::ofstream out(dir / "records.csv");
    if (!out) throw std::runtime_error("cannot write " + (dir / "records.csv").string());
    out << "instance_id,correct" << (with_conf ? ",confidence" : "") << "\n";
    for (const auto& rec : pool.records) {
      out << rec.instance_id << ',' << rec.correct;
      if (with_conf) {
        out << ',';
        if (rec.confidence.has_value()) out << format_float(*rec.confidence);
      }
      out << "\n";
    }
  }

  if (pool.has_embeddings()) {
    std::ofstream out(dir / "embeddings.jsonl");
    if (!out) throw std::runtime_error("cannot write " + (dir / "embeddings.jsonl").string());
    for (const auto& rec : pool.records) {
      json row;
      row["instance_id"] = rec.instance_id;
      row["vector"] = *rec.embedding;
      out << row.dump() << "\n";
    }
  }

  json manifest;
  manifest["records"] = "records.csv";
  manifest["embeddings"] = pool.has_embeddings() ? json("embeddings.jsonl") : json(nullptr);
  manifest["name"] = pool.name;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << "\n";
}

EvaluationPool synth_pool(const SynthConfig& config) {
  if (config.size < 1) throw std::invalid_argument("synth_pool: size must be >= 1");
  if (!(config.target_accuracy >= 0.0) || !(config.target_accuracy <= 1.0))
    throw std::invalid_argument("synth_pool: target_accuracy must lie in [0, 1]");
  const auto& spec = config.clusters;
  if (spec.count < 0) throw std::invalid_argument("synth_pool: cluster count must be >= 0");
  const bool with_embeddings = spec.count > 0;
  if (with_embeddings) {
    if (spec.embedding_dim < 1)
      throw std::invalid_argument("synth_pool: embedding_dim must be >= 1");
    if (!(spec.cluster_std >= 0.0) || !(spec.accuracy_spread >= 0.0))
      throw std::invalid_argument("synth_pool: cluster_std and accuracy_spread must be >= 0");
    if (static_cast<std::size_t>(spec.count) > config.size)
      throw std::invalid_argument("synth_pool: more clusters than records");
  }

  const std::size_t n = config.size;
  const std::size_t groups = with_embeddings ? static_cast<std::size_t>(spec.count) : 1;
  Rng rng(mix_seed(config.seed));

  // Per-cluster sizes: as equal as possible, earlier clusters take the slack.
  std::vector<std::size_t> sizes(groups, n / groups);
  for (std::size_t g = 0; g < n % groups; ++g) ++sizes[g];

  // Per-cluster accuracies spread symmetrically around the target, then
  // recentered so the weighted mean tracks the target before clamping.
  std::vector<double> accuracy(groups, config.target_accuracy);
  if (groups > 1) {
    for (std::size_t g = 0; g < groups; ++g) {
      const double u = 2.0 * static_cast<double>(g) / static_cast<double>(groups - 1) - 1.0;
      accuracy[g] = config.target_accuracy + spec.accuracy_spread * u;
    }
    double weighted = 0.0;
    for (std::size_t g = 0; g < groups; ++g)
      weighted += accuracy[g] * static_cast<double>(sizes[g]);
    const double shift = config.target_accuracy - weighted / static_cast<double>(n);
    for (auto& a : accuracy) a = std::clamp(a + shift, 0.0, 1.0);
  }

  std::vector<std::vector<double>> centers;
  if (with_embeddings) {
    centers.resize(groups);
    for (auto& c : centers) {
      c.resize(static_cast<std::size_t>(spec.embedding_dim));
      for (auto& v : c) v = rng.gaussian() * spec.center_scale;
    }
  }

  std::vector<PredictionRecord> records;
  records.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t m = sizes[g];
    if (m == 0) continue;
    const auto n_correct =
        static_cast<std::size_t>(std::llround(accuracy[g] * static_cast<double>(m)));
    std::vector<int> bits(m, 0);
    std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n_correct), 1);
    for (std::size_t i = m; i > 1; --i)
      std::swap(bits[i - 1], bits[rng.uniform_below(i)]);

    for (std::size_t i = 0; i < m; ++i) {
      PredictionRecord rec;
      rec.correct = bits[i];
      if (with_embeddings) {
        std::vector<double> e(centers[g].size());
        for (std::size_t d = 0; d < e.size(); ++d)
          e[d] = centers[g][d] + rng.gaussian() * spec.cluster_std;
        rec.embedding = std::move(e);
      }
      if (config.with_confidence)
        rec.confidence = std::clamp(accuracy[g] + 0.05 * rng.gaussian(), 0.01, 0.99);
      records.push_back(std::move(rec));
    }
  }

  // Shuffle record order so acquisition order is uncorrelated with cluster
  // layout, then assign ids by final position.
  for (std::size_t i = n; i > 1; --i)
    std::swap(records[i - 1], records[rng.uniform_below(i)]);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%06zu", i);
    records[i].instance_id = buf;
  }

  return make_pool(config.name, std::move(records));
}

}  // namespace ftl::pool
