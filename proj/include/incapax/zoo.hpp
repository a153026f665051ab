#pragma once

#include <map>
#include <sstream>

#include "incapax/channel.hpp"
#include "incapax/locc.hpp"

namespace incapax {
namespace zoo {

inline Channel identity(int d) {
  require(d >= 2, "identity: d must be >= 2");
  Channel ch;
  ch.dim_in = ch.dim_out = d;
  ch.kraus = {CMatrix::Identity(d, d)};
  ch.name = "identity(" + std::to_string(d) + ")";
  return ch;
}

// (1-p) rho + p Tr(rho) I/d via the Heisenberg-Weyl twirl.
inline Channel depolarizing(int d, double p) {
  require(d >= 2, "depolarizing: d must be >= 2");
  require(p >= 0.0 && p <= 1.0, "depolarizing: p must be in [0,1]");
  PauliFamily fam = gen_paulis(d);
  Channel ch;
  ch.dim_in = ch.dim_out = d;
  const double d2 = double(d) * d;
  for (size_t u = 0; u < fam.operators.size(); ++u) {
    const double c = (u == 0) ? (1.0 - p + p / d2) : p / d2;
    if (c > 0) ch.kraus.push_back(std::sqrt(c) * fam.operators[u]);
  }
  std::ostringstream os;
  os << "depolarizing(" << d << "," << p << ")";
  ch.name = os.str();
  return ch;
}

// Signal kept in the first d output levels, erasure flag |e> = |d>.
inline Channel erasure(int d, double p) {
  require(d >= 2, "erasure: d must be >= 2");
  require(p >= 0.0 && p <= 1.0, "erasure: p must be in [0,1]");
  Channel ch;
  ch.dim_in = d;
  ch.dim_out = d + 1;
  CMatrix keep = CMatrix::Zero(d + 1, d);
  keep.topRows(d) = CMatrix::Identity(d, d);
  if (1.0 - p > 0) ch.kraus.push_back(std::sqrt(1.0 - p) * keep);
  for (int i = 0; i < d; ++i) {
    CMatrix flag = CMatrix::Zero(d + 1, d);
    flag(d, i) = std::sqrt(p);
    if (p > 0) ch.kraus.push_back(std::move(flag));
  }
  std::ostringstream os;
  os << "erasure(" << d << "," << p << ")";
  ch.name = os.str();
  return ch;
}

// (1-p) rho + p diag(rho).
inline Channel dephasing(int d, double p) {
  require(d >= 2, "dephasing: d must be >= 2");
  require(p >= 0.0 && p <= 1.0, "dephasing: p must be in [0,1]");
  Channel ch;
  ch.dim_in = ch.dim_out = d;
  if (1.0 - p > 0) ch.kraus.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(d, d));
  for (int k = 0; k < d && p > 0; ++k) {
    CMatrix proj = CMatrix::Zero(d, d);
    proj(k, k) = std::sqrt(p);
    ch.kraus.push_back(std::move(proj));
  }
  std::ostringstream os;
  os << "dephasing(" << d << "," << p << ")";
  ch.name = os.str();
  return ch;
}

inline Channel amplitude_damping(double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "amplitude_damping: gamma must be in [0,1]");
  Channel ch;
  ch.dim_in = ch.dim_out = 2;
  CMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  ch.kraus = {k0, k1};
  std::ostringstream os;
  os << "amplitude_damping(" << gamma << ")";
  ch.name = os.str();
  return ch;
}

inline Channel completely_depolarizing(int d) {
  require(d >= 2, "completely_depolarizing: d must be >= 2");
  Channel ch;
  ch.dim_in = ch.dim_out = d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix k = CMatrix::Zero(d, d);
      k(i, j) = 1.0 / std::sqrt(double(d));
      ch.kraus.push_back(std::move(k));
    }
  ch.name = "completely_depolarizing(" + std::to_string(d) + ")";
  return ch;
}

inline std::vector<std::string> names() {
  return {"identity",          "depolarizing", "erasure", "dephasing",
          "amplitude_damping", "completely_depolarizing", "random"};
}

// Build from a name and a key-value parameter map; throws on unknown names or
// out-of-range parameters.
inline Channel build(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback, bool required = false) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (required) throw std::invalid_argument("zoo: missing parameter " + key);
    return fallback;
  };
  if (name == "identity") return identity(static_cast<int>(get("d", 2)));
  if (name == "depolarizing") return depolarizing(static_cast<int>(get("d", 2)), get("p", 0, true));
  if (name == "erasure") return erasure(static_cast<int>(get("d", 2)), get("p", 0, true));
  if (name == "dephasing") return dephasing(static_cast<int>(get("d", 2)), get("p", 0, true));
  if (name == "amplitude_damping") return amplitude_damping(get("gamma", 0, true));
  if (name == "completely_depolarizing")
    return completely_depolarizing(static_cast<int>(get("d", 2)));
  if (name == "random") {
    Channel ch = random_channel(static_cast<int>(get("d_in", 2)), static_cast<int>(get("d_out", 2)),
                                static_cast<int>(get("k", 2)),
                                static_cast<std::uint64_t>(get("seed", 1)));
    return ch;
  }
  throw std::invalid_argument("zoo: unknown channel name '" + name + "'");
}

}  // namespace zoo
}  // namespace incapax
