#pragma once

#include <fstream>

#include <json.hpp>

#include "incapax/channel.hpp"

namespace incapax {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix_from_json: expected rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row.at(static_cast<size_t>(c));
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

inline Json channel_to_json(const Channel& ch) {
  Json j;
  j["name"] = ch.name;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  Json kraus = Json::array();
  for (const auto& k : ch.kraus) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

inline Channel channel_from_json(const Json& j, double tp_tol = kDefaultTol.tp) {
  Channel ch;
  ch.name = j.value("name", "unnamed");
  ch.dim_in = j.at("dim_in").get<int>();
  ch.dim_out = j.at("dim_out").get<int>();
  if (ch.dim_in < 1 || ch.dim_out < 1)
    throw std::invalid_argument("channel_from_json: dimensions must be positive");
  for (const auto& k : j.at("kraus")) {
    CMatrix m = matrix_from_json(k);
    if (m.rows() != ch.dim_out || m.cols() != ch.dim_in)
      throw std::invalid_argument("channel_from_json: Kraus operator shape mismatch");
    ch.kraus.push_back(std::move(m));
  }
  if (ch.kraus.empty()) throw std::invalid_argument("channel_from_json: empty Kraus list");
  const double resid = ch.completeness_residual();
  if (resid > tp_tol)
    throw std::invalid_argument("channel_from_json: Kraus completeness violated, residual " +
                                std::to_string(resid));
  return ch;
}

inline void channel_to_json_file(const Channel& ch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << channel_to_json(ch).dump(2) << "\n";
}

inline Channel channel_from_json_file(const std::string& path, double tp_tol = kDefaultTol.tp) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Json j;
  in >> j;
  return channel_from_json(j, tp_tol);
}

inline Json superop_to_json(const SuperOperator& s) {
  Json j;
  j["dim_in"] = s.dim_in;
  j["dim_out"] = s.dim_out;
  j["mat"] = matrix_to_json(s.mat);
  return j;
}

inline SuperOperator superop_from_json(const Json& j) {
  SuperOperator s;
  s.dim_in = j.at("dim_in").get<int>();
  s.dim_out = j.at("dim_out").get<int>();
  s.mat = matrix_from_json(j.at("mat"));
  if (s.mat.rows() != static_cast<Eigen::Index>(s.dim_out) * s.dim_out ||
      s.mat.cols() != static_cast<Eigen::Index>(s.dim_in) * s.dim_in)
    throw std::invalid_argument("superop_from_json: matrix shape inconsistent with dims");
  return s;
}

inline SuperOperator superop_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Json j;
  in >> j;
  return superop_from_json(j);
}

}  // namespace incapax
