#include "nslab/grid.hpp"

#include <stdexcept>
#include <string>

namespace nslab {

void validate(const GridSpec& g) {
    if (!(g.L > 0.0))
        throw std::invalid_argument("GridSpec: L must be positive, got " + std::to_string(g.L));
    if (g.N < 8 || (g.N & (g.N - 1)) != 0)
        throw std::invalid_argument("GridSpec: N must be a power of two >= 8, got " +
                                    std::to_string(g.N));
}

}  // namespace nslab
