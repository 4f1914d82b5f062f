#include "spinergo/operators.hpp"

#include <string>

namespace spinergo {

template class SpectralHamiltonian<double>;
template class SpectralHamiltonian<std::complex<double>>;

Eigen::MatrixXd build_hamiltonian(const BondGraph& graph, const ModelParams& params) {
  const int n = graph.n_sites();
  if (n > kMaxSites)
    throw CapacityError(std::to_string(n) + " sites exceed the dense limit of " +
                        std::to_string(kMaxSites));
  for (double v : {params.gamma, params.delta, params.field, params.coupling})
    if (!std::isfinite(v)) throw InvalidParameter("model parameters must be finite");

  const Eigen::Index dim = Eigen::Index{1} << n;
  const double j = params.coupling;
  // Bond action on |ab>: ZZ is diagonal; XX and YY both flip the pair with
  // amplitude (1+g) - (1-g) = 2g for equal bits and (1+g) + (1-g) = 2 otherwise.
  const double flip_equal = 0.25 * j * 2.0 * params.gamma;
  const double flip_differ = 0.25 * j * 2.0;
  const double zz = 0.25 * j * params.delta;
  const double z_field = -0.5 * j * params.field;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    double diagonal = 0.0;
    for (int site = 0; site < n; ++site)
      diagonal += ((s >> site_bit(n, site)) & 1) ? -z_field : z_field;
    for (const Bond& bond : graph.bonds()) {
      const Eigen::Index mi = Eigen::Index{1} << site_bit(n, bond.i);
      const Eigen::Index mj = Eigen::Index{1} << site_bit(n, bond.j);
      const bool same = (((s & mi) != 0) == ((s & mj) != 0));
      diagonal += same ? zz : -zz;
      h(s ^ mi ^ mj, s) += same ? flip_equal : flip_differ;
    }
    h(s, s) += diagonal;
  }
  return h;
}

}  // namespace spinergo
