#ifndef CANNINGS_RATIONAL_HPP
#define CANNINGS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <utility>
#include <vector>

#include "cannings/offspring.hpp"

namespace cannings {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// exact-rational evaluation layer for the parametric offspring laws
// (table laws carry float probabilities, so they stay in double)

Rational falling_rational(const BigInt& x, int n);
Rational binom_rational(const BigInt& n, int k);

// closed-form Phi_j(k_1..k_j) as an exact rational
Rational phi_rational(const OffspringLaw& law, std::span<const int> counts);

// Var(nu_1) computed by exact enumeration of the law's orbits
Rational variance_rational(const OffspringLaw& law);

// exact orbit table (composition, probability) of a parametric law
std::vector<std::pair<std::vector<int>, Rational>> orbits_rational(const OffspringLaw& law);

// Phi via the orbit-enumeration route, exact; independent of phi_rational's
// closed forms
Rational phi_enumerated_rational(const OffspringLaw& law, std::span<const int> counts);

}  // namespace cannings

#endif
