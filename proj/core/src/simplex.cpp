#include "amencert/simplex.hpp"

namespace amencert {

template class SparseLU<double>;
template class SparseLU<Rational>;
template class RevisedSimplex<double>;
template class RevisedSimplex<Rational>;

}  // namespace amencert
