#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "unary.hpp"

namespace suprelax {

//! @brief Which side of a target function an estimator must stay on
enum class Bound { under, over };

//! @brief Continuous piecewise-linear function on an interval, segment encoding (nu0, delta, sigma)
//!
//! Breakpoints and vertex values are cached at construction for evaluation by
//! binary search. A zero-width domain holds one segment of width 0.
class PwlFunction
{
public:
  PwlFunction() = default;

  PwlFunction( const Interval& dom, double nu0, std::vector<double> deltas, std::vector<double> slopes )
  : _dom( dom ), _nu0( nu0 ), _deltas( std::move( deltas ) ), _slopes( std::move( slopes ) )
  {
    if( _deltas.empty() || _deltas.size() != _slopes.size() )
      throw ArgumentError( "segment encoding needs matching nonempty width and slope lists" );
    const double w = dom.width();
    if( w == 0. ){
      if( _deltas.size() != 1 || _deltas[0] != 0. ) throw ArgumentError( "zero-width domain takes a single zero-width segment" );
    }
    else{
      double sum = 0.;
      for( double d : _deltas ){
        if( !( d > 0. ) ) throw ArgumentError( "segment widths must be positive" );
        sum += d;
      }
      if( std::fabs( sum - w ) > 1e-12 * ( 1. + w ) ){
        std::ostringstream os;
        os << "segment widths sum to " << sum << " on a domain of width " << w;
        throw ArgumentError( os.str() );
      }
    }
    for( double s : _slopes )
      if( !std::isfinite( s ) ) throw ArgumentError( "segment slopes must be finite" );
    _cache();
  }

  //! @brief Interpolant through vertices (xs[k], ys[k]); xs[0] and xs.back() are the domain ends
  static PwlFunction from_vertices( const std::vector<double>& xs, const std::vector<double>& ys )
  {
    if( xs.size() < 2 || xs.size() != ys.size() ) throw ArgumentError( "need at least two vertices" );
    const Interval dom( xs.front(), xs.back() );
    if( dom.width() == 0. ) return PwlFunction( dom, ys.front(), { 0. }, { 0. } );
    const double tol = merge_tol( dom );
    std::vector<double> deltas, slopes;
    double x0 = xs.front(), y0 = ys.front();
    for( std::size_t k = 1; k < xs.size(); ++k ){
      const bool last = k + 1 == xs.size();
      if( !last && ( xs[k] - x0 <= tol || xs.back() - xs[k] <= tol ) ) continue;
      const double d = xs[k] - x0;
      if( d <= 0. ) continue;
      deltas.push_back( d );
      slopes.push_back( ( ys[k] - y0 ) / d );
      x0 = xs[k], y0 = ys[k];
    }
    if( deltas.empty() ){
      deltas.push_back( dom.width() );
      slopes.push_back( ( ys.back() - ys.front() ) / dom.width() );
    }
    return PwlFunction( dom, ys.front(), std::move( deltas ), std::move( slopes ) );
  }

  static PwlFunction constant( const Interval& dom, double c )
  {
    return PwlFunction( dom, c, { dom.width() }, { 0. } );
  }

  //! @brief x -> x on dom with n equidistant segments
  static PwlFunction identity( const Interval& dom, std::size_t n )
  {
    if( n < 1 ) throw ArgumentError( "identity needs at least one segment" );
    if( dom.width() == 0. ) return PwlFunction( dom, dom.lo(), { 0. }, { 1. } );
    std::vector<double> xs( n + 1 );
    for( std::size_t k = 0; k <= n; ++k ) xs[k] = k == n ? dom.hi() : dom.lo() + dom.width() * double( k ) / double( n );
    std::vector<double> deltas( n ), slopes( n, 1. );
    for( std::size_t k = 0; k < n; ++k ) deltas[k] = xs[k + 1] - xs[k];
    return PwlFunction( dom, dom.lo(), std::move( deltas ), std::move( slopes ) );
  }

  //! @brief Breakpoint snapping tolerance on a domain
  static double merge_tol( const Interval& dom )
  {
    return 1e-14 * dom.width() + 8. * std::numeric_limits<double>::epsilon() * dom.mag();
  }

  const Interval& domain() const { return _dom; }
  double nu0() const { return _nu0; }
  const std::vector<double>& deltas() const { return _deltas; }
  const std::vector<double>& slopes() const { return _slopes; }
  std::size_t size() const { return _deltas.size(); }
  //! @brief N+1 breakpoints, first and last equal to the domain ends
  const std::vector<double>& breakpoints() const { return _xs; }
  //! @brief Values at the N+1 breakpoints
  const std::vector<double>& vertex_values() const { return _vs; }

  double operator()( double x ) const { return eval( x ); }

  double eval( double x ) const
  {
    const double tol = 1e-12 * ( 1. + _dom.mag() );
    if( !( x >= _dom.lo() - tol && x <= _dom.hi() + tol ) ){
      std::ostringstream os;
      os << "point " << x << " outside summand domain " << _dom;
      throw ArgumentError( os.str() );
    }
    return eval_unchecked( x );
  }

  double eval_unchecked( double x ) const
  {
    const std::size_t N = _deltas.size();
    // segment k covers [xs[k], xs[k+1]]
    std::size_t k = std::upper_bound( _xs.begin() + 1, _xs.end() - 1, x ) - ( _xs.begin() + 1 );
    if( k >= N ) k = N - 1;
    return _vs[k] + _slopes[k] * ( x - _xs[k] );
  }

  //! @brief Segment index containing x (left-continuous at interior breakpoints)
  std::size_t locate( double x ) const
  {
    std::size_t k = std::upper_bound( _xs.begin() + 1, _xs.end() - 1, x ) - ( _xs.begin() + 1 );
    return std::min( k, _deltas.size() - 1 );
  }

private:
  void _cache()
  {
    const std::size_t N = _deltas.size();
    _xs.resize( N + 1 );
    _vs.resize( N + 1 );
    _xs[0] = _dom.lo();
    _vs[0] = _nu0;
    for( std::size_t k = 0; k < N; ++k ){
      _xs[k + 1] = _xs[k] + _deltas[k];
      _vs[k + 1] = _vs[k] + _slopes[k] * _deltas[k];
    }
    _xs[N] = _dom.hi();
  }

  Interval _dom;
  double _nu0 = 0.;
  std::vector<double> _deltas, _slopes;
  std::vector<double> _xs, _vs;
};

inline double pwl_eval( const PwlFunction& u, double x ) { return u.eval( x ); }

//! @brief (min, max) over the vertices
inline std::pair<double, double> pwl_extrema( const PwlFunction& u )
{
  auto [mn, mx] = std::minmax_element( u.vertex_values().begin(), u.vertex_values().end() );
  return { *mn, *mx };
}

//! @brief a*u + b: slopes scale by a, the offset enters nu0 only
inline PwlFunction pwl_affine( const PwlFunction& u, double a, double b )
{
  std::vector<double> slopes( u.slopes() );
  for( auto& s : slopes ) s *= a;
  return PwlFunction( u.domain(), a * u.nu0() + b, u.deltas(), std::move( slopes ) );
}

namespace detail {

inline void check_same_domain( const Interval& a, const Interval& b )
{
  const double tol = 1e-12 * ( 1. + std::max( a.mag(), b.mag() ) );
  if( std::fabs( a.lo() - b.lo() ) > tol || std::fabs( a.hi() - b.hi() ) > tol ){
    std::ostringstream os;
    os << "summand domains " << a << " and " << b << " differ";
    throw ArgumentError( os.str() );
  }
}

} // namespace detail

//! @brief Sum on the merged partition; slopes add segment by segment
inline PwlFunction pwl_add( const PwlFunction& u, const PwlFunction& v )
{
  detail::check_same_domain( u.domain(), v.domain() );
  const Interval& dom = u.domain();
  if( dom.width() == 0. )
    return PwlFunction( dom, u.nu0() + v.nu0(), { 0. }, { u.slopes()[0] + v.slopes()[0] } );
  const auto& xu = u.breakpoints();
  const auto& xv = v.breakpoints();
  const double tol = PwlFunction::merge_tol( dom );
  std::vector<double> xs;
  xs.reserve( xu.size() + xv.size() );
  std::merge( xu.begin() + 1, xu.end() - 1, xv.begin() + 1, xv.end() - 1, std::back_inserter( xs ) );
  std::vector<double> cut{ dom.lo() };
  for( double x : xs )
    if( x - cut.back() > tol && dom.hi() - x > tol ) cut.push_back( x );
  cut.push_back( dom.hi() );
  std::vector<double> deltas, slopes;
  std::size_t iu = 0, iv = 0;
  for( std::size_t k = 0; k + 1 < cut.size(); ++k ){
    const double a = cut[k], b = cut[k + 1];
    // advance to the segment whose right end lies beyond a (after snapping)
    while( iu + 1 < u.size() && xu[iu + 1] <= a + tol ) ++iu;
    while( iv + 1 < v.size() && xv[iv + 1] <= a + tol ) ++iv;
    deltas.push_back( b - a );
    slopes.push_back( u.slopes()[iu] + v.slopes()[iv] );
  }
  return PwlFunction( dom, u.nu0() + v.nu0(), std::move( deltas ), std::move( slopes ) );
}

enum class TruncMode { max, min };

//! @brief max(u, c) or min(u, c), with breakpoints inserted at level crossings
inline PwlFunction pwl_truncate( const PwlFunction& u, double c, TruncMode mode )
{
  if( mode == TruncMode::min )
    return pwl_affine( pwl_truncate( pwl_affine( u, -1., 0. ), -c, TruncMode::max ), -1., 0. );
  const Interval& dom = u.domain();
  if( dom.width() == 0. ) return PwlFunction( dom, std::max( u.nu0(), c ), { 0. }, { u.nu0() >= c ? u.slopes()[0] : 0. } );
  const auto& xs = u.breakpoints();
  const auto& vs = u.vertex_values();
  const double tol = PwlFunction::merge_tol( dom );
  std::vector<double> deltas, slopes;
  auto push = [&]( double d, double s ){
    if( d <= 0. ) return;
    // only flat runs merge; unclipped breakpoints of u are kept for later compositions
    if( s == 0. && !slopes.empty() && slopes.back() == 0. ){ deltas.back() += d; return; }
    deltas.push_back( d );
    slopes.push_back( s );
  };
  for( std::size_t k = 0; k < u.size(); ++k ){
    const double x0 = xs[k], x1 = xs[k + 1], y0 = vs[k], y1 = vs[k + 1], s = u.slopes()[k];
    const double d = x1 - x0;
    if( y0 >= c && y1 >= c ){ push( d, s ); continue; }
    if( y0 <= c && y1 <= c ){ push( d, 0. ); continue; }
    // strict crossing: s != 0
    double t = ( c - y0 ) / s;
    if( t <= tol ) t = 0.;
    if( d - t <= tol ) t = d;
    if( y0 < c ){ push( t, 0. ); push( d - t, s ); }
    else{ push( t, s ); push( d - t, 0. ); }
  }
  // absorb drift so that flat runs sit exactly at c
  std::vector<double> ys{ std::max( u.nu0(), c ) }, xv{ dom.lo() };
  for( std::size_t k = 0; k < deltas.size(); ++k ){
    xv.push_back( k + 1 == deltas.size() ? dom.hi() : xv.back() + deltas[k] );
    ys.push_back( slopes[k] == 0. ? ys.back() : ys.back() + slopes[k] * deltas[k] );
  }
  for( std::size_t k = 1; k < ys.size(); ++k ){
    const double ux = u.eval_unchecked( xv[k] );
    ys[k] = std::max( ux, c );
  }
  return PwlFunction::from_vertices( xv, ys );
}

//! @brief Convex profile view: eval and one-sided deriv; negates a concave profile when flipped
template <typename P>
struct SignedProfile
{
  const P& p;
  double sign;
  double eval( double z ) const { return sign * p.eval( z ); }
  double deriv( double z, Side s ) const { return sign * p.deriv( z, s ); }
};

//! @brief Under/over bracket of psi(u(x)) from secants and tangent pairs per segment
//!
//! psi must be convex (curv = convex) or concave on the range of u, and may be
//! any type providing eval(z) and deriv(z, Side). Both brackets interpolate
//! psi(u) at every breakpoint of u.
template <typename P>
std::pair<PwlFunction, PwlFunction> pwl_compose_bracket( const PwlFunction& u, const P& psi, Curvature curv = Curvature::convex )
{
  const double sgn = curv == Curvature::convex ? 1. : -1.;
  SignedProfile<P> f{ psi, sgn };
  const Interval& dom = u.domain();
  const auto& xs = u.breakpoints();
  const auto& vs = u.vertex_values();
  std::vector<double> psi_v( vs.size() );
  for( std::size_t k = 0; k < vs.size(); ++k ){
    psi_v[k] = f.eval( vs[k] );
    if( !std::isfinite( psi_v[k] ) ){
      std::ostringstream os;
      os << "profile not finite at " << vs[k];
      throw DomainError( os.str() );
    }
  }
  if( dom.width() == 0. ){
    const PwlFunction c = PwlFunction::constant( dom, sgn * psi_v[0] );
    return { c, c };
  }
  std::vector<double> ux{ xs[0] }, uy{ psi_v[0] };
  for( std::size_t k = 0; k < u.size(); ++k ){
    const double s = u.slopes()[k], d = xs[k + 1] - xs[k];
    const double pL = psi_v[k], pR = psi_v[k + 1];
    if( s != 0. && vs[k] != vs[k + 1] ){
      const double dL = f.deriv( vs[k], s > 0. ? Side::right : Side::left );
      const double dR = f.deriv( vs[k + 1], s > 0. ? Side::left : Side::right );
      if( !std::isfinite( dL ) || !std::isfinite( dR ) ){
        std::ostringstream os;
        os << "unbounded profile slope on image [" << std::min( vs[k], vs[k + 1] ) << "," << std::max( vs[k], vs[k + 1] ) << "]";
        throw DomainError( os.str() );
      }
      const double s1 = s * dL, s2 = s * dR;
      if( s2 - s1 > 0. ){
        const double t = ( s2 * d - ( pR - pL ) ) / ( s2 - s1 );
        if( std::isfinite( t ) && t > 0. && t < d ){
          ux.push_back( xs[k] + t );
          uy.push_back( std::min( pL + s1 * t, pR - s2 * ( d - t ) ) );
        }
      }
    }
    ux.push_back( xs[k + 1] );
    uy.push_back( pR );
  }
  PwlFunction tangent = PwlFunction::from_vertices( ux, uy );
  PwlFunction secant = PwlFunction::from_vertices( xs, psi_v );
  if( curv == Curvature::convex ) return { std::move( tangent ), std::move( secant ) };
  return { pwl_affine( secant, -1., 0. ), pwl_affine( tangent, -1., 0. ) };
}

//! @brief Options for segment reduction
struct SimplifyOptions
{
  //! Side the reduced function must stay on relative to the input
  Bound side = Bound::under;
  //! Maximum pointwise deviation per move
  double tol = 0.;
  //! Target segment count; 0 reduces while moves within tol exist
  std::size_t budget = 0;
};

//! @brief Collinear merge plus optional side-respecting greedy reduction
//!
//! Moves: drop a vertex by its chord, or drop a segment by extending its two
//! neighbours to their intersection. A move is admissible only if it keeps the
//! function on the declared side and deviates by at most tol.
inline PwlFunction pwl_simplify( const PwlFunction& u, const SimplifyOptions& opt = {} )
{
  if( u.domain().width() == 0. ) return u;
  std::vector<double> xs = u.breakpoints(), ys = u.vertex_values();
  // collinear merge
  {
    std::vector<double> cx{ xs[0] }, cy{ ys[0] };
    for( std::size_t k = 1; k + 1 < xs.size(); ++k )
      if( u.slopes()[k - 1] != u.slopes()[k] ){ cx.push_back( xs[k] ); cy.push_back( ys[k] ); }
    cx.push_back( xs.back() ); cy.push_back( ys.back() );
    xs.swap( cx ); ys.swap( cy );
  }
  if( opt.tol <= 0. ) return PwlFunction::from_vertices( xs, ys );
  // s > 0 when the replacement must lie below (under), < 0 above (over)
  const double sd = opt.side == Bound::under ? 1. : -1.;
  auto slope = [&]( std::size_t j ){ return ( ys[j + 1] - ys[j] ) / ( xs[j + 1] - xs[j] ); };
  while( xs.size() > 2 ){
    const std::size_t nseg = xs.size() - 1;
    if( opt.budget && nseg <= opt.budget ) break;
    double best = std::numeric_limits<double>::infinity();
    int kind = -1;
    std::size_t where = 0;
    double nx = 0., ny = 0.;
    // vertex removal: chord between neighbours
    for( std::size_t j = 1; j + 1 < xs.size(); ++j ){
      const double chord = ys[j - 1] + ( ys[j + 1] - ys[j - 1] ) * ( xs[j] - xs[j - 1] ) / ( xs[j + 1] - xs[j - 1] );
      const double dev = sd * ( ys[j] - chord );
      if( dev >= 0. && dev <= opt.tol && dev < best ){ best = dev; kind = 0; where = j; }
    }
    // segment removal: extend the neighbours
    for( std::size_t j = 0; j < nseg; ++j ){
      double dev, px, py;
      if( j == 0 || j + 1 == nseg ){
        // end segment: extend the inner neighbour to the domain end
        if( nseg < 2 ) continue;
        const std::size_t nb = j == 0 ? 1 : nseg - 2;
        const double sn = slope( nb );
        px = j == 0 ? xs[0] : xs.back();
        const double ax = j == 0 ? xs[1] : xs[nseg - 1], ay = j == 0 ? ys[1] : ys[nseg - 1];
        py = ay + sn * ( px - ax );
        const double old = j == 0 ? ys[0] : ys.back();
        dev = sd * ( old - py );
      }
      else{
        const double sa = slope( j - 1 ), sb = slope( j + 1 );
        if( sa == sb ) continue;
        px = ( ys[j + 1] - ys[j] + sa * xs[j] - sb * xs[j + 1] ) / ( sa - sb );
        if( !( px >= xs[j] && px <= xs[j + 1] ) ) continue;
        py = ys[j] + sa * ( px - xs[j] );
        const double sj = slope( j );
        // new graph lies on the declared side of segment j only when the moved corner does
        const double seg_at = ys[j] + sj * ( px - xs[j] );
        dev = sd * ( seg_at - py );
      }
      if( dev >= 0. && dev <= opt.tol && dev < best ){ best = dev; kind = 1; where = j; nx = px; ny = py; }
    }
    if( kind < 0 ) break;
    if( kind == 0 ){
      xs.erase( xs.begin() + where );
      ys.erase( ys.begin() + where );
    }
    else if( where == 0 ){
      xs.erase( xs.begin() + 1 ); ys.erase( ys.begin() + 1 );
      ys[0] = ny;
    }
    else if( where + 1 == nseg ){
      xs.erase( xs.end() - 2 ); ys.erase( ys.end() - 2 );
      ys.back() = ny;
    }
    else{
      xs[where] = nx; ys[where] = ny;
      xs.erase( xs.begin() + where + 1 ); ys.erase( ys.begin() + where + 1 );
    }
  }
  return PwlFunction::from_vertices( xs, ys );
}

} // namespace suprelax
