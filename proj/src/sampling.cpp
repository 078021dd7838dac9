#include "usea/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace usea {

Population lhs_init(std::size_t n, const Bounds& bounds, RngStream& rng)
{
    if (n == 0)
        throw std::invalid_argument("lhs_init: N must be positive");
    const Eigen::Index dim = bounds.dim();
    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), dim);
    std::vector<std::size_t> perm(n);
    for (Eigen::Index j = 0; j < dim; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
        const double lo = bounds.lower()(j);
        const double width = (bounds.upper()(j) - lo) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double stratum = static_cast<double>(perm[i]);
            double u = rng.uniform();
            while (u == 0.0)
                u = rng.uniform();
            double v = lo + (stratum + u) * width;
            // Rounding may push a point onto the next stratum's edge.
            const double top = lo + (stratum + 1.0) * width;
            v = std::min(v, std::nextafter(top, lo));
            v = std::max(v, lo + stratum * width);
            design(static_cast<Eigen::Index>(i), j) = std::min(v, bounds.upper()(j));
        }
    }
    Population pop(Role::Offspring);
    pop.reserve(n);
    for (Eigen::Index i = 0; i < design.rows(); ++i)
        pop.push_back(Individual(design.row(i).transpose()));
    return pop;
}

} // namespace usea
