#pragma once

#include <optional>
#include <string>

#include "lowfit/grid.hpp"
#include "lowfit/instance.hpp"

namespace lowfit {

struct ParsedInput {
  std::optional<Matrix> d;
  std::optional<Matrix> w;
  std::optional<Matrix> a;
  int k = 1;
  int p = 4;
};

// JSON ({"d":..,"k":..} / {"d":..,"w":..} / {"A":..,"p":..}) or header-free
// square CSV (treated as a d matrix).
ParsedInput parse_input_file(const std::string& path);

Matrix load_csv_matrix(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// {"schema":1, "points":..., "objective":..., "provenance":{...}}; the
// embedding's own provenance JSON is merged with version and flags.
std::string embedding_json(const Embedding& emb, const std::string& flags_json);

std::string lra_json(const Vec& u, const Vec& v, double objective,
                     const std::string& provenance_json, const std::string& flags_json);

std::string emv_instance_json(const EmvInstance& inst, const std::string& provenance_json);
std::string wemv_instance_json(const WeightedEmvInstance& inst,
                               const std::string& provenance_json);

std::string error_json(const std::string& code, const std::string& message);

}  // namespace lowfit
