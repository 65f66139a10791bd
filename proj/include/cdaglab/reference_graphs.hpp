#ifndef CDAGLAB_REFERENCE_GRAPHS_HPP
#define CDAGLAB_REFERENCE_GRAPHS_HPP

#include <vector>

#include "cdaglab/cdag.hpp"
#include "cdaglab/separability.hpp"

namespace cdaglab::ref {

/// Seven-token q=1 chain whose split node combines two two-token parts
/// ({3,4} and {5,6}) with remainder {1,2,7}.
CDag separable_chain();

/// Same shape with non-contiguous parts ({2,6} and {3,5}).
CDag separable_scattered();

/// Coverage quadruple: index 0 is the test item (the separable chain), the
/// rest are training items matching its part a, part b and remainder.
std::vector<AnnotatedCDag> coverage_quadruple();

/// The remainder-matching training item with its graph outside the split
/// node re-routed; coverage must reject it.
AnnotatedCDag coverage_outside_mutated();

}  // namespace cdaglab::ref

#endif
