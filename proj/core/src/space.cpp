#include <sstream>

#include "shiftlab/funcspace/point.hpp"
#include "shiftlab/funcspace/space.hpp"

namespace shiftlab {

std::string to_string(ScalarField field) { return field == ScalarField::Real ? "REAL" : "COMPLEX"; }

ScalarField field_from_string(const std::string& name) {
  if (name == "REAL") return ScalarField::Real;
  if (name == "COMPLEX") return ScalarField::Complex;
  throw ValidationError("unknown scalar field '" + name + "'");
}

}  // namespace shiftlab

namespace shiftlab::funcspace {

bool same_point(const PointRef& a, const PointRef& b, double tol) {
  if (a.index() != b.index()) return false;
  if (auto* pa = std::get_if<BlockPoint>(&a)) {
    const auto& pb = std::get<BlockPoint>(b);
    if (pa->block != pb.block || pa->angles.size() != pb.angles.size()) return false;
    for (std::size_t j = 0; j < pa->angles.size(); ++j)
      if (angle_distance(pa->angles[j], pb.angles[j]) > tol) return false;
    if (pa->symbol.has_value() != pb.symbol.has_value()) return false;
    return !pa->symbol || *pa->symbol == *pb.symbol;
  }
  if (auto* sa = std::get_if<SeqPoint>(&a)) return sa->n == std::get<SeqPoint>(b).n;
  return std::get<LimitRef>(a).index == std::get<LimitRef>(b).index;
}

std::string describe(const PointRef& x) {
  std::ostringstream os;
  if (auto* p = std::get_if<BlockPoint>(&x)) {
    os << "block " << p->block;
    if (!p->angles.empty()) {
      os << " angles(";
      for (std::size_t j = 0; j < p->angles.size(); ++j) os << (j ? "," : "") << p->angles[j];
      os << ")";
    }
    if (p->symbol) {
      os << " word[";
      for (int v : p->symbol->read(-3, 6)) os << v;
      os << "]";
    }
  } else if (auto* s = std::get_if<SeqPoint>(&x)) {
    os << "seq " << s->n;
  } else {
    os << "limit " << std::get<LimitRef>(x).index;
  }
  return os.str();
}

void BlockSpace::validate() const {
  if (blocks.empty()) throw StructuralError("space has no blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.id != static_cast<int>(i) + 1)
      throw StructuralError("block ids must be 1..n in order, found " + std::to_string(b.id) +
                            " at position " + std::to_string(i + 1));
    if (b.circles < 0 || b.degree < 0) throw StructuralError("negative truncation on block");
    if (b.symbol && (b.symbol->alphabet < 2 || b.symbol->depth < 0))
      throw StructuralError("symbol factor needs alphabet >= 2 and depth >= 0");
  }
  if (sequence_len < 1) throw StructuralError("sequence_len must be >= 1");
  if (limits.empty()) throw StructuralError("space needs at least one limit point");
  for (const auto& l : limits)
    if (l.address) check_point(*l.address);
}

const BlockDescriptor& BlockSpace::block(int id) const {
  if (id < 1 || id > block_count())
    throw StructuralError("block " + std::to_string(id) + " does not exist");
  return blocks[static_cast<std::size_t>(id - 1)];
}

void BlockSpace::check_point(const PointRef& x) const {
  if (auto* p = std::get_if<BlockPoint>(&x)) {
    const auto& b = block(p->block);
    if (static_cast<int>(p->angles.size()) != b.circles)
      throw StructuralError("point on block " + std::to_string(b.id) + " has " +
                            std::to_string(p->angles.size()) + " angles, block has " +
                            std::to_string(b.circles) + " circle factors");
    if (p->symbol.has_value() != b.symbol.has_value())
      throw StructuralError("symbol coordinate does not match block " + std::to_string(b.id));
    if (p->symbol && p->symbol->max_letter() >= b.symbol->alphabet)
      throw StructuralError("symbol letter outside the alphabet");
  } else if (auto* s = std::get_if<SeqPoint>(&x)) {
    if (s->n < 1) throw StructuralError("sequence points start at 1");
  } else {
    int k = std::get<LimitRef>(x).index;
    if (k < 0 || k >= limit_count())
      throw StructuralError("limit point " + std::to_string(k) + " does not exist");
  }
}

SpacePtr make_space(BlockSpace space) {
  space.validate();
  return std::make_shared<const BlockSpace>(std::move(space));
}

bool same_shape(const BlockSpace& a, const BlockSpace& b) {
  if (a.blocks.size() != b.blocks.size() || a.limits.size() != b.limits.size()) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    const auto &x = a.blocks[i], &y = b.blocks[i];
    if (x.circles != y.circles || x.degree != y.degree || x.symbol.has_value() != y.symbol.has_value())
      return false;
    if (x.symbol && x.symbol->alphabet != y.symbol->alphabet) return false;
  }
  return a.field == b.field;
}

}  // namespace shiftlab::funcspace
