#pragma once

#include <string>

namespace incapax {

enum class IncapacityReason { TimeReversal, Cloning };

inline const char* to_string(IncapacityReason r) {
  return r == IncapacityReason::TimeReversal ? "time-reversal" : "cloning";
}

struct ZeroCapacityCertificate {
  IncapacityReason reason;
  std::string channel_id;
  double min_eig = 0.0;              // PPT route: min partial-transposed Choi eigenvalue
  double feasibility_distance = 0.0; // cloning route: terminal feasibility distance
  double verification_residual = 0.0;
  std::string detail;
};

}  // namespace incapax
