#include "qats/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qats {

namespace {

using nlohmann::json;

constexpr char kCacheMagic[6] = {'Q', 'A', 'T', 'S', 'G', '1'};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF line endings everywhere
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open for reading: " + path);
  return in;
}

void append_u64_le(std::string& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::invalid_argument("score cache truncated");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path, std::int64_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(path + ": malformed number '" + s + "' on line " +
                                std::to_string(line_no));
  }
}

std::int32_t parse_state(const std::string& s, const std::string& path, std::int64_t line_no) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
      throw std::out_of_range("state out of range");
    return static_cast<std::int32_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(path + ": malformed state '" + s + "' on line " +
                                std::to_string(line_no));
  }
}

}  // namespace

HmmModel load_model_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": malformed model JSON: " + e.what());
  }
  try {
    const int m = j.at("m").get<int>();
    const auto pi = j.at("pi").get<std::vector<double>>();
    const auto trans_rows = j.at("trans").get<std::vector<std::vector<double>>>();
    const auto& emission = j.at("emission");
    if (emission.at("type").get<std::string>() != "gaussian")
      throw std::invalid_argument(path + ": unsupported emission type");
    auto means = emission.at("means").get<std::vector<double>>();
    const double sigma = emission.at("sigma").get<double>();

    if (static_cast<int>(pi.size()) != m || static_cast<int>(trans_rows.size()) != m)
      throw std::invalid_argument(path + ": dimensions do not match m");
    Matrix<double> trans(m, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(trans_rows[static_cast<std::size_t>(i)].size()) != m)
        throw std::invalid_argument(path + ": transition rows must have m entries");
      for (int k = 0; k < m; ++k) trans(i, k) = trans_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return build_model(pi, trans, GaussianEmission(std::move(means), sigma));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": malformed model JSON: " + e.what());
  }
}

void save_model_json(const HmmModel& model, const std::string& path) {
  if (!model.gaussian())
    throw std::invalid_argument("save_model_json: only Gaussian emissions are serializable");
  json j;
  j["m"] = model.m();
  j["pi"] = model.pi();
  std::vector<std::vector<double>> trans_rows;
  for (int i = 0; i < model.m(); ++i) {
    std::vector<double> row;
    for (int k = 0; k < model.m(); ++k) row.push_back(model.trans()(i, k));
    trans_rows.push_back(std::move(row));
  }
  j["trans"] = trans_rows;
  j["emission"] = {{"type", "gaussian"},
                   {"means", model.gaussian()->means()},
                   {"sigma", model.gaussian()->sigma()}};
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

DataFile load_data_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty data CSV");
  const auto header = split_csv_line(line);

  bool has_truth = false;
  if (header.size() == 2 && header[0] == "k" && header[1] == "y") {
    has_truth = false;
  } else if (header.size() == 3 && header[0] == "k" && header[1] == "x_true" && header[2] == "y") {
    has_truth = true;
  } else {
    throw std::invalid_argument(path + ": expected header 'k,y' or 'k,x_true,y'");
  }

  DataFile out;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument(path + ": wrong field count on line " + std::to_string(line_no));
    if (has_truth) {
      out.x_true.push_back(parse_state(fields[1], path, line_no));
      out.y.push_back(parse_double(fields[2], path, line_no));
    } else {
      out.y.push_back(parse_double(fields[1], path, line_no));
    }
  }
  if (out.y.empty()) throw std::invalid_argument(path + ": no observations");
  return out;
}

void save_sim_csv(const std::string& path, const SimOutput& sim) {
  auto out = open_out(path);
  std::string buf = "k,x_true,y\n";
  for (std::size_t k = 0; k < sim.y.size(); ++k) {
    buf += std::to_string(k + 1);
    buf += ',';
    buf += std::to_string(sim.x_true[k]);
    buf += ',';
    buf += format_double(sim.y[k]);
    buf += '\n';
  }
  out << buf;
}

void save_path_csv(const std::string& path, std::span<const std::int32_t> path_states) {
  auto out = open_out(path);
  std::string buf = "k,x_hat\n";
  for (std::size_t k = 0; k < path_states.size(); ++k) {
    buf += std::to_string(k + 1);
    buf += ',';
    buf += std::to_string(path_states[k]);
    buf += '\n';
  }
  out << buf;
}

void save_segments_csv(const std::string& path, const Segmentation& segmentation) {
  auto out = open_out(path);
  std::string buf = "ell,r,state\n";
  for (std::size_t u = 0; u < segmentation.segments.size(); ++u) {
    buf += std::to_string(segmentation.segments[u].l);
    buf += ',';
    buf += std::to_string(segmentation.segments[u].r);
    buf += ',';
    buf += std::to_string(segmentation.states[u]);
    buf += '\n';
  }
  out << buf;
}

void save_bench_csv(const std::string& path, std::span<const BenchRecord> records) {
  auto out = open_out(path);
  std::string buf = "n,m,s,sigma,seed,rep,t_qats_ms,t_viterbi_ms,d0_q,d0_v,d2_q,d2_v,s_hat\n";
  for (const BenchRecord& r : records) {
    buf += std::to_string(r.config.n) + ',' + std::to_string(r.config.m) + ',' +
           std::to_string(r.config.s) + ',' + format_double(r.config.sigma) + ',' +
           std::to_string(r.config.seed) + ',' + std::to_string(r.config.replication_id) + ',' +
           format_double(r.t_qats_ms) + ',' + format_double(r.t_viterbi_ms) + ',' +
           format_double(r.d0_qats) + ',' + format_double(r.d0_viterbi) + ',' +
           format_double(r.d2_qats) + ',' + format_double(r.d2_viterbi) + ',' +
           std::to_string(r.s_hat_qats) + '\n';
  }
  out << buf;
}

void save_summary_csv(const std::string& path, std::span<const SummaryRow> rows) {
  auto out = open_out(path);
  std::string buf = "n,m,s,sigma,reps,beta,t_qats_ms,t_viterbi_ms,speedup,d0_q,d0_v,d2_q,d2_v\n";
  for (const SummaryRow& r : rows) {
    buf += std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.s) + ',' +
           format_double(r.sigma) + ',' + std::to_string(r.reps) + ',' + format_double(r.beta) +
           ',' + format_double(r.t_qats_ms) + ',' + format_double(r.t_viterbi_ms) + ',' +
           format_double(r.speedup) + ',' + format_double(r.d0_qats) + ',' +
           format_double(r.d0_viterbi) + ',' + format_double(r.d2_qats) + ',' +
           format_double(r.d2_viterbi) + '\n';
  }
  out << buf;
}

void save_cum_scores(const std::string& path, const CumScores& scores) {
  auto out = open_out(path);
  std::string buf(kCacheMagic, sizeof(kCacheMagic));
  const int m = scores.m();
  const std::int64_t n = scores.n();
  append_u64_le(buf, static_cast<std::uint64_t>(m));
  append_u64_le(buf, static_cast<std::uint64_t>(n));
  buf.reserve(buf.size() + static_cast<std::size_t>(m) * static_cast<std::size_t>(n) * 8);
  for (int i = 1; i <= m; ++i) {
    for (std::int64_t k = 1; k <= n; ++k) {
      append_u64_le(buf, std::bit_cast<std::uint64_t>(scores.G(i, k)));
    }
  }
  out << buf;
}

CumScores load_cum_scores(const std::string& path, const HmmModel& model) {
  auto in = open_in(path);
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, kCacheMagic, 6) != 0)
    throw std::invalid_argument(path + ": not a score cache (bad magic)");
  const auto m = static_cast<std::int64_t>(read_u64_le(in));
  const auto n = static_cast<std::int64_t>(read_u64_le(in));
  if (m != model.m())
    throw std::invalid_argument(path + ": cache state count does not match the model");
  if (n < 1) throw std::invalid_argument(path + ": cache holds no positions");

  Matrix<double> padded(m, n + 1, 0.0);
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t k = 1; k <= n; ++k) {
      padded(i, k) = std::bit_cast<double>(read_u64_le(in));
    }
  }
  return CumScores::adopt(model, std::move(padded));
}

}  // namespace qats
