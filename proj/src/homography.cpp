#include "sketchact/homography.hpp"

namespace sketchact {

template class BasicHomography<double>;
template HomographyEstimate estimate_homography<double>(const std::vector<Correspondence>&);

}  // namespace sketchact
