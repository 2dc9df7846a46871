#include "kreisslab/matrix_io.hpp"

#include <fstream>
#include <json.hpp>

#include "kreisslab/json_writer.hpp"

namespace kreisslab {

std::string matrix_to_json(const CMatrix& a) {
  require_finite(a, "matrix_to_json");
  JsonWriter w;
  w.begin_object();
  w.kv("rows", static_cast<long long>(a.rows()));
  w.kv("cols", static_cast<long long>(a.cols()));
  w.key("re").begin_array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) w.value(a(i, j).real());
  w.end_array();
  w.key("im").begin_array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) w.value(a(i, j).imag());
  w.end_array();
  w.end_object();
  return w.str();
}

CMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("matrix_from_json: parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re") || !j.contains("im"))
    throw input_error("matrix_from_json: expected {rows, cols, re, im}");
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  if (rows <= 0 || cols <= 0)
    throw input_error("matrix_from_json: rows/cols must be positive");
  const auto& re = j["re"];
  const auto& im = j["im"];
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (re.size() != n || im.size() != n)
    throw input_error("matrix_from_json: entry count does not match rows*cols");
  CMatrix a(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj, ++k)
      a(i, jj) = cd(re[k].get<double>(), im[k].get<double>());
  require_finite(a, "matrix_from_json");
  return a;
}

void write_matrix_file(const std::string& path, const CMatrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("write_matrix_file: cannot open " + path);
  out << matrix_to_json(a) << '\n';
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("read_matrix_file: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return matrix_from_json(text);
}

} // namespace kreisslab
