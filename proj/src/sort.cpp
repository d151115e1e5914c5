#include "mg/sort.hpp"

#include "mg/errors.hpp"

namespace mg {

Sort Sort::bitvec(unsigned width) {
  if (width == 0) throw TypeError("bitvector width must be positive");
  if (width > kMaxWidth) throw UnsupportedError("bitvector width " + std::to_string(width) + " exceeds 64");
  return Sort(Kind::BitVec, width);
}

std::string Sort::to_string() const {
  if (is_bool()) return "Bool";
  return "(_ BitVec " + std::to_string(width_) + ")";
}

}  // namespace mg
