#include "lowfit/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lowfit {

using nlohmann::json;

namespace {

Matrix to_matrix(const json& j) {
  Matrix m;
  for (const auto& row : j) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get<double>());
    m.push_back(std::move(r));
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(r);
  return rows;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Err::BadInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Err::BadInput, "cannot write " + path);
  out << content;
}

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::BadInput, "cannot open " + path);
  Matrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    m.push_back(std::move(row));
  }
  if (m.empty() || m.size() != m[0].size())
    throw Error(Err::BadInput, "csv matrix must be square and header-free");
  return m;
}

ParsedInput parse_input_file(const std::string& path) {
  ParsedInput out;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    out.d = load_csv_matrix(path);
    return out;
  }
  json j = json::parse(read_file(path));
  if (j.contains("k")) out.k = j["k"].get<int>();
  if (j.contains("p")) out.p = j["p"].get<int>();
  if (j.contains("d")) out.d = to_matrix(j["d"]);
  if (j.contains("w")) out.w = to_matrix(j["w"]);
  if (j.contains("A")) out.a = to_matrix(j["A"]);
  if (!out.d && !out.a) throw Error(Err::BadInput, "input needs a \"d\" or \"A\" matrix");
  return out;
}

namespace {

json provenance_obj(const std::string& own, const std::string& flags_json) {
  json prov = own.empty() ? json::object() : json::parse(own);
  prov["version"] = kVersion;
  if (!flags_json.empty()) prov["flags"] = json::parse(flags_json);
  return prov;
}

}  // namespace

std::string embedding_json(const Embedding& emb, const std::string& flags_json) {
  json j;
  j["schema"] = 1;
  json pts = json::array();
  for (const auto& p : emb.points) pts.push_back(p);
  j["points"] = pts;
  j["objective"] = emb.objective;
  j["provenance"] = provenance_obj(emb.provenance, flags_json);
  return j.dump(2) + "\n";
}

std::string lra_json(const Vec& u, const Vec& v, double objective,
                     const std::string& provenance_json, const std::string& flags_json) {
  json j;
  j["schema"] = 1;
  j["u"] = u;
  j["v"] = v;
  j["objective"] = objective;
  j["provenance"] = provenance_obj(provenance_json, flags_json);
  return j.dump(2) + "\n";
}

std::string emv_instance_json(const EmvInstance& inst, const std::string& provenance_json) {
  json j;
  j["schema"] = 1;
  j["d"] = matrix_json(inst.d);
  j["k"] = inst.k;
  j["provenance"] = provenance_obj(provenance_json, "");
  return j.dump(2) + "\n";
}

std::string wemv_instance_json(const WeightedEmvInstance& inst,
                               const std::string& provenance_json) {
  json j;
  j["schema"] = 1;
  j["d"] = matrix_json(inst.base.d);
  j["w"] = matrix_json(inst.w);
  j["k"] = inst.base.k;
  j["provenance"] = provenance_obj(provenance_json, "");
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& code, const std::string& message) {
  json j;
  j["error"] = {{"code", code}, {"message", message}};
  return j.dump() + "\n";
}

}  // namespace lowfit
