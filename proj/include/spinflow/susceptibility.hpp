#pragma once

namespace spinflow {

/// Expected Glauber probability that a degree-k node in the majority state 0
/// flips to state 1, with each neighbor independently in the majority state
/// with probability f (binomial neighborhood approximation):
///   E = sum_m C(k,m) f^m (1-f)^{k-m} * glauber_accept(2 J (2m - k), beta),
/// m counting neighbors that share the node's current state.
double flip_susceptibility(int k, double f, double beta, double coupling = 1.0);

/// Binary entropy h2(f) in bits; the neighborhood-entropy reparameterization
/// of the majority fraction.
double binary_entropy(double f);

}  // namespace spinflow
