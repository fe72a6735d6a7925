#pragma once

namespace gpg {

// Relation of one domain to another in a hierarchy index set.  NestedIn is
// proper nesting of the first into the second; Equal only on the diagonal.
enum class DomainRelation { Equal, NestedIn, NestedOver, Orthogonal, Transverse };

inline const char* relation_name(DomainRelation r) {
  switch (r) {
    case DomainRelation::Equal: return "equal";
    case DomainRelation::NestedIn: return "nested-in";
    case DomainRelation::NestedOver: return "nested-over";
    case DomainRelation::Orthogonal: return "orthogonal";
    case DomainRelation::Transverse: return "transverse";
  }
  return "?";
}

}  // namespace gpg
