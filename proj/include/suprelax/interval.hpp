#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace suprelax {

//! @brief Closed real interval [lo,hi]
//!
//! Endpoints are computed in native floating point; no outward rounding is
//! applied. Zero-width intervals are valid values and propagate exactly.
class Interval
{
public:
  constexpr Interval() = default;
  constexpr Interval( double c ): _lo( c ), _hi( c ) {}
  Interval( double lo, double hi ): _lo( lo ), _hi( hi )
  {
    if( !( lo <= hi ) ){
      std::ostringstream os;
      os << "invalid interval [" << lo << "," << hi << "]";
      throw ArgumentError( os.str() );
    }
  }

  constexpr double lo() const { return _lo; }
  constexpr double hi() const { return _hi; }
  constexpr double width() const { return _hi - _lo; }
  constexpr double mid() const { return 0.5 * ( _lo + _hi ); }
  constexpr double mag() const { return std::max( std::fabs( _lo ), std::fabs( _hi ) ); }
  constexpr bool contains( double x ) const { return _lo <= x && x <= _hi; }
  constexpr bool contains( const Interval& z ) const { return _lo <= z._lo && z._hi <= _hi; }
  constexpr bool is_degenerate() const { return _lo == _hi; }

  friend constexpr bool operator==( const Interval&, const Interval& ) = default;

private:
  double _lo = 0.;
  double _hi = 0.;
};

inline std::ostream& operator<<( std::ostream& os, const Interval& z )
{
  return os << "[" << z.lo() << "," << z.hi() << "]";
}

inline Interval iv_add( const Interval& a, const Interval& b ) { return { a.lo() + b.lo(), a.hi() + b.hi() }; }
inline Interval iv_sub( const Interval& a, const Interval& b ) { return { a.lo() - b.hi(), a.hi() - b.lo() }; }
inline Interval iv_neg( const Interval& a ) { return { -a.hi(), -a.lo() }; }

inline Interval iv_scale( const Interval& a, double s )
{
  if( s >= 0. ) return { s * a.lo(), s * a.hi() };
  return { s * a.hi(), s * a.lo() };
}

inline Interval iv_shift( const Interval& a, double b ) { return { a.lo() + b, a.hi() + b }; }

inline Interval iv_mul( const Interval& a, const Interval& b )
{
  const double p[4] = { a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi() };
  return { *std::min_element( p, p + 4 ), *std::max_element( p, p + 4 ) };
}

inline Interval iv_div( const Interval& a, const Interval& b )
{
  if( b.contains( 0. ) ){
    std::ostringstream os;
    os << "interval division by " << b << " containing zero";
    throw DomainError( os.str() );
  }
  return iv_mul( a, Interval( 1. / b.hi(), 1. / b.lo() ) );
}

inline Interval hull( const Interval& a, const Interval& b )
{
  return { std::min( a.lo(), b.lo() ), std::max( a.hi(), b.hi() ) };
}

//! @brief Intersection; throws InfeasibleBound when empty
inline Interval intersect( const Interval& a, const Interval& b )
{
  const double lo = std::max( a.lo(), b.lo() ), hi = std::min( a.hi(), b.hi() );
  if( lo > hi ){
    std::ostringstream os;
    os << "empty intersection of " << a << " and " << b;
    throw InfeasibleBound( os.str() );
  }
  return { lo, hi };
}

inline Interval iv_max( const Interval& a, double c ) { return { std::max( a.lo(), c ), std::max( a.hi(), c ) }; }
inline Interval iv_min( const Interval& a, double c ) { return { std::min( a.lo(), c ), std::min( a.hi(), c ) }; }

inline Interval operator+( const Interval& a, const Interval& b ) { return iv_add( a, b ); }
inline Interval operator-( const Interval& a, const Interval& b ) { return iv_sub( a, b ); }
inline Interval operator-( const Interval& a ) { return iv_neg( a ); }
inline Interval operator*( const Interval& a, const Interval& b ) { return iv_mul( a, b ); }
inline Interval operator*( double s, const Interval& a ) { return iv_scale( a, s ); }
inline Interval operator/( const Interval& a, const Interval& b ) { return iv_div( a, b ); }

//! @brief Cartesian product of n >= 1 intervals
class Box
{
public:
  Box() = default;
  explicit Box( std::vector<Interval> dims ): _dims( std::move( dims ) )
  {
    if( _dims.empty() ) throw ArgumentError( "box must have at least one dimension" );
  }
  Box( std::initializer_list<Interval> dims ): Box( std::vector<Interval>( dims ) ) {}
  //! @brief Hypercube X^n
  static Box cube( const Interval& x, std::size_t n ) { return Box( std::vector<Interval>( n, x ) ); }

  std::size_t size() const { return _dims.size(); }
  const Interval& operator[]( std::size_t i ) const { return _dims[i]; }
  const std::vector<Interval>& dims() const { return _dims; }
  auto begin() const { return _dims.begin(); }
  auto end() const { return _dims.end(); }

  //! @brief Euclidean diameter sqrt(sum wid(X_i)^2)
  double diam() const
  {
    double s = 0.;
    for( auto const& Xi : _dims ) s += Xi.width() * Xi.width();
    return std::sqrt( s );
  }
  double max_width() const
  {
    double w = 0.;
    for( auto const& Xi : _dims ) w = std::max( w, Xi.width() );
    return w;
  }
  std::vector<double> midpoint() const
  {
    std::vector<double> m;
    m.reserve( _dims.size() );
    for( auto const& Xi : _dims ) m.push_back( Xi.mid() );
    return m;
  }
  std::vector<double> lower_corner() const
  {
    std::vector<double> c;
    for( auto const& Xi : _dims ) c.push_back( Xi.lo() );
    return c;
  }
  std::vector<double> upper_corner() const
  {
    std::vector<double> c;
    for( auto const& Xi : _dims ) c.push_back( Xi.hi() );
    return c;
  }
  bool contains( std::span<const double> x ) const
  {
    if( x.size() != _dims.size() ) return false;
    for( std::size_t i = 0; i < x.size(); ++i )
      if( !_dims[i].contains( x[i] ) ) return false;
    return true;
  }

  friend bool operator==( const Box&, const Box& ) = default;

private:
  std::vector<Interval> _dims;
};

inline std::ostream& operator<<( std::ostream& os, const Box& X )
{
  for( std::size_t i = 0; i < X.size(); ++i ) os << ( i ? "x" : "" ) << X[i];
  return os;
}

//! @brief Contracted box rho*X + (1-rho)*center
inline Box box_contract( const Box& X, double rho, std::span<const double> center )
{
  if( !( rho > 0. && rho <= 1. ) ){
    std::ostringstream os;
    os << "contraction ratio " << rho << " outside (0,1]";
    throw ArgumentError( os.str() );
  }
  if( !X.contains( center ) ) throw ArgumentError( "contraction center outside box" );
  std::vector<Interval> dims;
  dims.reserve( X.size() );
  for( std::size_t i = 0; i < X.size(); ++i ){
    const double c = ( 1. - rho ) * center[i];
    double lo = rho * X[i].lo() + c, hi = rho * X[i].hi() + c;
    if( hi < lo ) hi = lo;
    dims.emplace_back( lo, hi );
  }
  return Box( std::move( dims ) );
}

} // namespace suprelax
