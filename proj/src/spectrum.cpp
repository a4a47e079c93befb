#include "entrench/spectrum.hpp"

namespace entrench {

std::string_view to_string(InfluenceKind kind) {
  switch (kind) {
    case InfluenceKind::Uniform:     return "uniform";
    case InfluenceKind::Linear:      return "linear";
    case InfluenceKind::Quadratic:   return "quadratic";
    case InfluenceKind::CoLinear:    return "colinear";
    case InfluenceKind::CoQuadratic: return "coquadratic";
  }
  return "?";
}

InfluenceKind influence_kind_from_string(std::string_view name) {
  if (name == "uniform") return InfluenceKind::Uniform;
  if (name == "linear") return InfluenceKind::Linear;
  if (name == "quadratic") return InfluenceKind::Quadratic;
  if (name == "colinear" || name == "co-linear") return InfluenceKind::CoLinear;
  if (name == "coquadratic" || name == "co-quadratic") return InfluenceKind::CoQuadratic;
  throw std::invalid_argument("unknown influence kind: " + std::string(name));
}

}  // namespace entrench
