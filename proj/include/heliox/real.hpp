#pragma once

// Scalar types accepted by the numerical templates. Hylleraas overlap
// matrices lose positive definiteness in binary64 around omega = 12 and in
// x87 extended precision around omega = 14, so the variational stage can
// also run in IEEE quad precision.

#include <cmath>
#include <concepts>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace heliox {

using quad = boost::multiprecision::float128;

template <class T>
concept RealScalar = std::floating_point<T> || std::same_as<T, quad>;

// Unqualified calls pick these up for builtin types and the boost
// overloads (via ADL) for quad.
using std::abs;
using std::exp;
using std::hypot;
using std::isfinite;
using std::log;
using std::sqrt;

template <RealScalar Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

}  // namespace heliox
