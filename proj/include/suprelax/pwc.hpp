#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "pwl.hpp"
#include "unary.hpp"

namespace suprelax {

//! @brief Piecewise-constant summand over N equal-width cells, one Interval per cell
//!
//! As an underestimator the summand reads each cell's lower value, as an
//! overestimator its upper value.
class PwcPair
{
public:
  PwcPair() = default;
  PwcPair( const Interval& dom, std::vector<Interval> cells ): _dom( dom ), _cells( std::move( cells ) )
  {
    if( _cells.empty() ) throw ArgumentError( "piecewise-constant summand needs at least one cell" );
  }

  static PwcPair constant( const Interval& dom, std::size_t n, double c )
  {
    if( n < 1 ) throw ArgumentError( "piecewise-constant summand needs at least one cell" );
    return PwcPair( dom, std::vector<Interval>( n, Interval( c ) ) );
  }
  //! @brief Each cell holds its own subinterval
  static PwcPair identity( const Interval& dom, std::size_t n )
  {
    if( n < 1 ) throw ArgumentError( "piecewise-constant summand needs at least one cell" );
    std::vector<Interval> cells;
    cells.reserve( n );
    for( std::size_t k = 0; k < n; ++k ) cells.push_back( cell_bounds( dom, n, k ) );
    return PwcPair( dom, std::move( cells ) );
  }

  static Interval cell_bounds( const Interval& dom, std::size_t n, std::size_t k )
  {
    const double a = dom.lo() + dom.width() * double( k ) / double( n );
    const double b = k + 1 == n ? dom.hi() : dom.lo() + dom.width() * double( k + 1 ) / double( n );
    return { a, std::max( a, b ) };
  }

  const Interval& domain() const { return _dom; }
  std::size_t size() const { return _cells.size(); }
  const std::vector<Interval>& cells() const { return _cells; }
  const Interval& operator[]( std::size_t k ) const { return _cells[k]; }

  std::size_t locate( double x ) const
  {
    const double tol = 1e-12 * ( 1. + _dom.mag() );
    if( !( x >= _dom.lo() - tol && x <= _dom.hi() + tol ) ){
      std::ostringstream os;
      os << "point " << x << " outside summand domain " << _dom;
      throw ArgumentError( os.str() );
    }
    if( _dom.width() == 0. ) return 0;
    const double r = ( x - _dom.lo() ) / _dom.width() * double( _cells.size() );
    const double k = std::floor( r );
    if( k < 0. ) return 0;
    return std::min( std::size_t( k ), _cells.size() - 1 );
  }

  //! @brief Value of the summand read on the given side
  double eval( double x, Bound side ) const
  {
    const Interval& c = _cells[locate( x )];
    return side == Bound::under ? c.lo() : c.hi();
  }

private:
  Interval _dom;
  std::vector<Interval> _cells;
};

//! @brief (min of lower values, max of upper values)
inline std::pair<double, double> pwc_extrema( const PwcPair& a )
{
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for( auto const& c : a.cells() ) lo = std::min( lo, c.lo() ), hi = std::max( hi, c.hi() );
  return { lo, hi };
}

//! @brief Extrema of the summand read on one side
inline std::pair<double, double> pwc_extrema( const PwcPair& a, Bound side )
{
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for( auto const& c : a.cells() ){
    const double v = side == Bound::under ? c.lo() : c.hi();
    lo = std::min( lo, v ), hi = std::max( hi, v );
  }
  return { lo, hi };
}

namespace detail {

inline void check_same_partition( const PwcPair& a, const PwcPair& b )
{
  if( a.size() != b.size() || !( a.domain() == b.domain() ) ){
    std::ostringstream os;
    os << "partition mismatch: " << a.size() << " cells on " << a.domain() << " vs " << b.size() << " cells on " << b.domain();
    throw ArgumentError( os.str() );
  }
}

} // namespace detail

//! @brief Cellwise unary operation
template <typename Op>
PwcPair pwc_apply( const PwcPair& a, Op&& op )
{
  std::vector<Interval> cells;
  cells.reserve( a.size() );
  for( auto const& c : a.cells() ) cells.push_back( op( c ) );
  return PwcPair( a.domain(), std::move( cells ) );
}

//! @brief Cellwise binary operation on identical partitions
template <typename Op>
PwcPair pwc_apply( const PwcPair& a, const PwcPair& b, Op&& op )
{
  detail::check_same_partition( a, b );
  std::vector<Interval> cells;
  cells.reserve( a.size() );
  for( std::size_t k = 0; k < a.size(); ++k ) cells.push_back( op( a[k], b[k] ) );
  return PwcPair( a.domain(), std::move( cells ) );
}

inline PwcPair pwc_add( const PwcPair& a, const PwcPair& b )
{
  return pwc_apply( a, b, []( const Interval& x, const Interval& y ){ return x + y; } );
}

inline PwcPair pwc_affine( const PwcPair& a, double s, double b )
{
  return pwc_apply( a, [=]( const Interval& x ){ return iv_shift( iv_scale( x, s ), b ); } );
}

inline PwcPair pwc_compose( const PwcPair& a, const UnaryFunc& phi )
{
  return pwc_apply( a, [&]( const Interval& x ){ return iv_extend( phi, x ); } );
}

inline PwcPair pwc_truncate( const PwcPair& a, double c, TruncMode mode )
{
  if( mode == TruncMode::max ) return pwc_apply( a, [=]( const Interval& x ){ return iv_max( x, c ); } );
  return pwc_apply( a, [=]( const Interval& x ){ return iv_min( x, c ); } );
}

} // namespace suprelax
