#include "jsrcert/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jsrcert/errors.hpp"

namespace jsrcert {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& context) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw IoError("malformed JSON in " + context);
  return j;
}

Eigen::MatrixXd matrix_from_flat(const json& arr, int rows, int cols,
                                 const std::string& context) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rows * cols)
    throw IoError(context + ": expected " + std::to_string(rows * cols) + " entries");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const json& v = arr[static_cast<std::size_t>(r * cols + c)];
      if (!v.is_number()) throw IoError(context + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  return m;
}

json flat_from_matrix(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, Eigen::Index size,
                                 const std::string& context) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != size)
    throw IoError(context + ": expected " + std::to_string(size) + " entries");
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const json& e = arr[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw IoError(context + ": non-numeric entry");
    v(i) = e.get<double>();
  }
  return v;
}

json json_from_vector(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

int get_int(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw IoError(context + ": missing integer field \"" + key + "\"");
  return j[key].get<int>();
}

std::int64_t get_int64(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw IoError(context + ": missing integer field \"" + key + "\"");
  return j[key].get<std::int64_t>();
}

std::uint64_t get_seed(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key) || !j[key].is_number())
    throw IoError(context + ": missing field \"" + key + "\"");
  return j[key].get<std::uint64_t>();
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("short write to " + path);
}

std::string file_content_hash(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001B3ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + hex;
}

SwitchedLinearSystem load_system(const std::string& path) {
  const json j = parse_json(read_text_file(path), path);
  SwitchedLinearSystem sys;
  sys.n = get_int(j, "n", path);
  sys.M = get_int(j, "M", path);
  sys.p = get_int(j, "p", path);
  if (sys.n < 1 || sys.M < 1 || sys.p < 1) throw IoError(path + ": n, M, p must be >= 1");
  if (!j.contains("A") || !j["A"].is_array() || static_cast<int>(j["A"].size()) != sys.M)
    throw IoError(path + ": \"A\" must list " + std::to_string(sys.M) + " matrices");
  if (!j.contains("C") || !j["C"].is_array() || static_cast<int>(j["C"].size()) != sys.M)
    throw IoError(path + ": \"C\" must list " + std::to_string(sys.M) + " matrices");
  for (int m = 0; m < sys.M; ++m) {
    sys.A.push_back(matrix_from_flat(j["A"][static_cast<std::size_t>(m)], sys.n, sys.n,
                                     path + ": A[" + std::to_string(m) + "]"));
    sys.C.push_back(matrix_from_flat(j["C"][static_cast<std::size_t>(m)], sys.p, sys.n,
                                     path + ": C[" + std::to_string(m) + "]"));
  }
  sys.validate();
  return sys;
}

void save_system(const SwitchedLinearSystem& sys, const std::string& path) {
  sys.validate();
  json j;
  j["n"] = sys.n;
  j["M"] = sys.M;
  j["p"] = sys.p;
  json A = json::array(), C = json::array();
  for (int m = 0; m < sys.M; ++m) {
    A.push_back(flat_from_matrix(sys.A[static_cast<std::size_t>(m)]));
    C.push_back(flat_from_matrix(sys.C[static_cast<std::size_t>(m)]));
  }
  j["A"] = std::move(A);
  j["C"] = std::move(C);
  write_text_file(path, j.dump() + "\n");
}

SampleSet load_trajectories(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty trajectory file");
  const json header = parse_json(line, path + " header");
  SampleSet set;
  set.n = get_int(header, "n", path);
  set.M = get_int(header, "M", path);
  set.p = get_int(header, "p", path);
  set.T = get_int64(header, "T", path);
  set.N = get_int64(header, "N", path);
  set.seed = get_seed(header, "seed", path);
  set.samples.reserve(static_cast<std::size_t>(set.N));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = parse_json(line, path + " record");
    TrajectorySample sample;
    if (rec.contains("x0") && !rec["x0"].is_null())
      sample.x0 = vector_from_json(rec["x0"], set.n, path + ": x0");
    if (rec.contains("word") && !rec["word"].is_null()) {
      const json& w = rec["word"];
      if (!w.is_array() || static_cast<std::int64_t>(w.size()) != set.T)
        throw IoError(path + ": word must have T symbols");
      SwitchingWord word;
      for (const auto& s : w) {
        if (!s.is_number_integer()) throw IoError(path + ": non-integer mode symbol");
        word.symbols.push_back(s.get<int>());
      }
      sample.word = std::move(word);
    }
    if (!rec.contains("y") || !rec["y"].is_array() ||
        static_cast<std::int64_t>(rec["y"].size()) != set.T)
      throw IoError(path + ": record needs T output vectors");
    for (const auto& yt : rec["y"])
      sample.y.push_back(vector_from_json(yt, set.p, path + ": y"));
    set.samples.push_back(std::move(sample));
  }
  set.validate();
  return set;
}

void save_trajectories(const SampleSet& set, const std::string& path,
                       bool strip_provenance) {
  set.validate();
  std::ostringstream out;
  json header;
  header["n"] = set.n;
  header["M"] = set.M;
  header["p"] = set.p;
  header["T"] = set.T;
  header["N"] = set.N;
  header["seed"] = set.seed;
  out << header.dump() << "\n";
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const TrajectorySample& s = set.samples[i];
    json rec;
    rec["i"] = i;
    if (!strip_provenance && s.x0)
      rec["x0"] = json_from_vector(*s.x0);
    else
      rec["x0"] = nullptr;
    if (!strip_provenance && s.word)
      rec["word"] = s.word->symbols;
    else
      rec["word"] = nullptr;
    json y = json::array();
    for (const auto& yt : s.y) y.push_back(json_from_vector(yt));
    rec["y"] = std::move(y);
    out << rec.dump() << "\n";
  }
  write_text_file(path, out.str());
}

DataPairSet load_pairs(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty pair file");
  const json header = parse_json(line, path + " header");
  DataPairSet set;
  set.source_n = get_int(header, "n", path);
  set.source_M = get_int(header, "M", path);
  set.p = get_int(header, "p", path);
  set.k = get_int(header, "k", path);
  set.T = get_int64(header, "T", path);
  set.N = get_int64(header, "N", path);
  set.seed = get_seed(header, "seed", path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = parse_json(line, path + " record");
    if (!rec.contains("v") || !rec.contains("z")) throw IoError(path + ": record needs v and z");
    DataPair pr;
    pr.v = vector_from_json(rec["v"], set.kp(), path + ": v");
    pr.z = vector_from_json(rec["z"], set.kp(), path + ": z");
    set.pairs.push_back(std::move(pr));
  }
  if (static_cast<std::int64_t>(set.pairs.size()) != set.N)
    throw IoError(path + ": header says N = " + std::to_string(set.N) + ", file has " +
                  std::to_string(set.pairs.size()) + " records");
  set.validate();
  return set;
}

void save_pairs(const DataPairSet& pairs, const std::string& path) {
  pairs.validate();
  std::ostringstream out;
  json header;
  header["n"] = pairs.source_n;
  header["M"] = pairs.source_M;
  header["p"] = pairs.p;
  header["k"] = pairs.k;
  header["T"] = pairs.T;
  header["N"] = pairs.N;
  header["seed"] = pairs.seed;
  out << header.dump() << "\n";
  for (const auto& pr : pairs.pairs) {
    json rec;
    rec["v"] = json_from_vector(pr.v);
    rec["z"] = json_from_vector(pr.z);
    out << rec.dump() << "\n";
  }
  write_text_file(path, out.str());
}

}  // namespace jsrcert
