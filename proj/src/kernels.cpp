#include "dixt/kernels.hpp"

namespace dixt {

std::string_view to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::ReI: return "re-i";
    case TransformKind::ReJK: return "re-jk";
    case TransformKind::ImJK: return "im-jk";
  }
  return "unknown";
}

}  // namespace dixt
