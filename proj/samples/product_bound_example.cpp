// Builds a pair of unitaries that attain the product bound with equality and
// prints what the checker reports about them.

#include <iostream>

#include "unispec/unispec.hpp"

int main() {
  using namespace unispec;
  Rng rng(2024);

  const auto [u, v] = make_equality_pair(4, 1, {0.7}, {1.1}, rng);
  const auto r = check_product_bound(u, v);
  std::cout << "theta_+(u v) = " << r.theta_plus_product.radians << " (bound " << r.bound_plus << ")\n"
            << "equality_plus = " << std::boolalpha << r.equality_plus << '\n';
  if (r.eigenspace_plus)
    std::cout << "dim(H+(u) ∩ H+(v)) = " << r.eigenspace_plus->lhs_dim
              << ", distance to H+(uv) = " << r.eigenspace_plus->subspace_distance << '\n';

  const auto a = random_bounded_unitary(4, {1.0}, rng);
  const auto b = random_bounded_unitary(4, {1.0}, rng);
  const auto g = check_product_bound(a, b);
  std::cout << "generic pair: slack_plus = " << g.slack_plus << ", slack_minus = " << g.slack_minus << '\n';
}
