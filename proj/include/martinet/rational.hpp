#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <string>

// Older boost probes C::const_iterator without guarding against void, which
// is exactly what Eigen's two-dimensional expressions carry. The probe runs
// while the multiprecision constructors are considered as implicit
// conversions inside Eigen operator overload resolution, so any matrix
// product over an mp scalar fails to compile. Newer boost adds the guard;
// these specializations give the same answer here.
namespace boost {
namespace multiprecision {
namespace detail {

template <class S, int R, int C, int O, int MR, int MC>
struct is_byte_container<Eigen::Matrix<S, R, C, O, MR, MC>> : public boost::false_type {};

template <class D>
struct is_byte_container<Eigen::MatrixBase<D>> : public boost::false_type {};

template <class D>
struct is_byte_container<Eigen::DenseBase<D>> : public boost::false_type {};

template <class X>
struct is_byte_container<Eigen::Transpose<X>> : public boost::false_type {};

template <class X, int BR, int BC, bool IP>
struct is_byte_container<Eigen::Block<X, BR, BC, IP>> : public boost::false_type {};

template <class L, class R, int Opt>
struct is_byte_container<Eigen::Product<L, R, Opt>> : public boost::false_type {};

template <class B, class L, class R>
struct is_byte_container<Eigen::CwiseBinaryOp<B, L, R>> : public boost::false_type {};

template <class U, class X>
struct is_byte_container<Eigen::CwiseUnaryOp<U, X>> : public boost::false_type {};

template <class N, class P>
struct is_byte_container<Eigen::CwiseNullaryOp<N, P>> : public boost::false_type {};

}  // namespace detail
}  // namespace multiprecision
}  // namespace boost

namespace martinet {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

inline int sign(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational rational(long num, long den = 1) { return Rational(num, den); }

}  // namespace martinet
