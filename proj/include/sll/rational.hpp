#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "sll/common.hpp"

namespace sll {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline BigInt pow2(int e) {
    if (e < 0) throw ParameterError("pow2: negative exponent");
    return BigInt(1) << e;
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

}  // namespace sll
