#include "spinflow/susceptibility.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflow/ising.hpp"

namespace spinflow {

double flip_susceptibility(int k, double f, double beta, double coupling) {
    if (k < 0) throw std::invalid_argument("flip_susceptibility: degree must be >= 0");
    if (!(f >= 0.0 && f <= 1.0))
        throw std::invalid_argument("flip_susceptibility: f must be in [0,1]");
    // m neighbors share the node's current (majority) state: local field
    // sum sigma_j = (k - m) - m, so the 0->1 flip costs dE = 2 J (2m - k).
    double expectation = 0.0;
    double comb = 1.0;  // C(k, m)
    for (int m = 0; m <= k; ++m) {
        const double weight = comb * std::pow(f, m) * std::pow(1.0 - f, k - m);
        expectation += weight * glauber_accept(2.0 * coupling * (2 * m - k), beta);
        comb = comb * (k - m) / (m + 1);
    }
    return expectation;
}

double binary_entropy(double f) {
    if (f <= 0.0 || f >= 1.0) return 0.0;
    return -f * std::log2(f) - (1.0 - f) * std::log2(1.0 - f);
}

}  // namespace spinflow
