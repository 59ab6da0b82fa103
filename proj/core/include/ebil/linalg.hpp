#pragma once

// Exact rank and determinant of rational matrices via fraction-free
// (Bareiss) elimination on the denominator-cleared integer matrix.

#include <ebil/rational.hpp>

#include <vector>

namespace ebil {

using RMatrix = std::vector<std::vector<Rational>>;

int rank_exact(const RMatrix& m);
Rational det_exact(const RMatrix& m);

// One rational null vector of m (viewed as mapping column space), or empty
// if the columns are independent.
std::vector<Rational> null_vector_exact(const RMatrix& m);

}  // namespace ebil
