#pragma once

#include <complex>

namespace monodromy {

using Complex = std::complex<double>;

} // namespace monodromy
