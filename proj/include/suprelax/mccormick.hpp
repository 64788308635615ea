#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "unary.hpp"

namespace suprelax {

//! @brief McCormick relaxation values at one point, with subgradients
struct McValue
{
  Interval range;
  double cv = 0., cc = 0.;
  std::vector<double> sub_cv, sub_cc;

  std::size_t dim() const { return sub_cv.size(); }
};

inline McValue mc_const( double c, std::size_t n )
{
  return { Interval( c ), c, c, std::vector<double>( n, 0. ), std::vector<double>( n, 0. ) };
}

//! @brief Variable i of box at point x
inline McValue mc_var( std::size_t i, const Box& box, std::span<const double> x )
{
  if( i >= box.size() || x.size() != box.size() ) throw ArgumentError( "variable index or point size does not match box" );
  McValue v{ box[i], x[i], x[i], std::vector<double>( box.size(), 0. ), std::vector<double>( box.size(), 0. ) };
  v.sub_cv[i] = v.sub_cc[i] = 1.;
  return v;
}

namespace detail {

inline void mc_cut( McValue& v )
{
  if( v.cv < v.range.lo() ){ v.cv = v.range.lo(); std::fill( v.sub_cv.begin(), v.sub_cv.end(), 0. ); }
  if( v.cc > v.range.hi() ){ v.cc = v.range.hi(); std::fill( v.sub_cc.begin(), v.sub_cc.end(), 0. ); }
}

inline std::vector<double> axpy( double a, const std::vector<double>& x, double b, const std::vector<double>& y )
{
  std::vector<double> r( x.size() );
  for( std::size_t k = 0; k < x.size(); ++k ) r[k] = a * x[k] + b * y[k];
  return r;
}

} // namespace detail

inline McValue mc_add( const McValue& a, const McValue& b )
{
  McValue r{ a.range + b.range, a.cv + b.cv, a.cc + b.cc, detail::axpy( 1., a.sub_cv, 1., b.sub_cv ), detail::axpy( 1., a.sub_cc, 1., b.sub_cc ) };
  detail::mc_cut( r );
  return r;
}

inline McValue mc_affine( const McValue& a, double s, double b )
{
  const std::vector<double> z( a.dim(), 0. );
  McValue r;
  r.range = iv_shift( iv_scale( a.range, s ), b );
  if( s >= 0. ){
    r.cv = s * a.cv + b, r.cc = s * a.cc + b;
    r.sub_cv = detail::axpy( s, a.sub_cv, 0., z ), r.sub_cc = detail::axpy( s, a.sub_cc, 0., z );
  }
  else{
    r.cv = s * a.cc + b, r.cc = s * a.cv + b;
    r.sub_cv = detail::axpy( s, a.sub_cc, 0., z ), r.sub_cc = detail::axpy( s, a.sub_cv, 0., z );
  }
  return r;
}

inline McValue mc_sub( const McValue& a, const McValue& b ) { return mc_add( a, mc_affine( b, -1., 0. ) ); }

//! @brief Bilinear product rule on the operand bounds
inline McValue mc_mul( const McValue& x, const McValue& y )
{
  const double xL = x.range.lo(), xU = x.range.hi(), yL = y.range.lo(), yU = y.range.hi();
  // c*x underestimated by c*cv (c >= 0) or c*cc (c < 0); overestimated the other way
  auto lo_term = []( double c, const McValue& v, std::vector<double>& g ){
    if( c >= 0. ){ g = detail::axpy( c, v.sub_cv, 0., v.sub_cv ); return c * v.cv; }
    g = detail::axpy( c, v.sub_cc, 0., v.sub_cc ); return c * v.cc;
  };
  auto hi_term = []( double c, const McValue& v, std::vector<double>& g ){
    if( c >= 0. ){ g = detail::axpy( c, v.sub_cc, 0., v.sub_cc ); return c * v.cc; }
    g = detail::axpy( c, v.sub_cv, 0., v.sub_cv ); return c * v.cv;
  };
  std::vector<double> g1, g2, g3, g4;
  const double a = lo_term( yL, x, g1 ) + lo_term( xL, y, g2 ) - xL * yL;
  const double b = lo_term( yU, x, g3 ) + lo_term( xU, y, g4 ) - xU * yU;
  McValue r;
  r.range = x.range * y.range;
  if( a >= b ){ r.cv = a; r.sub_cv = detail::axpy( 1., g1, 1., g2 ); }
  else{ r.cv = b; r.sub_cv = detail::axpy( 1., g3, 1., g4 ); }
  const double c = hi_term( yL, x, g1 ) + hi_term( xU, y, g2 ) - xU * yL;
  const double d = hi_term( yU, x, g3 ) + hi_term( xL, y, g4 ) - xL * yU;
  if( c <= d ){ r.cc = c; r.sub_cc = detail::axpy( 1., g1, 1., g2 ); }
  else{ r.cc = d; r.sub_cc = detail::axpy( 1., g3, 1., g4 ); }
  detail::mc_cut( r );
  return r;
}

//! @brief Convex and concave envelopes of a catalog function on an interval
//!
//! Functions with one inflection get tangent-chord envelopes; with two or more
//! inflections the envelopes fall back to the constant interval bounds.
class McEnvelope
{
public:
  McEnvelope( const UnaryFunc& phi, const Interval& z ): _phi( phi ), _z( z )
  {
    const auto seg = segment( phi, z );
    const Interval r = iv_extend( phi, z );
    _rlo = r.lo(), _rhi = r.hi();
    _argmin = _argmax = z.lo();
    double vmin = phi.eval( z.lo() ), vmax = vmin;
    auto take = [&]( double s ){
      const double v = phi.eval( s );
      if( v < vmin ){ vmin = v; _argmin = s; }
      if( v > vmax ){ vmax = v; _argmax = s; }
    };
    for( auto const& pc : seg.pieces ){
      take( pc.range.hi() );
      if( pc.monotonicity == Monotonicity::nonmonotone ) take( pc.sigma_star );
    }
    if( seg.pieces.size() == 1 ){
      _mode = seg.pieces[0].curvature == Curvature::convex ? Mode::convex : Mode::concave;
    }
    else if( seg.pieces.size() == 2 ){
      _mode = seg.pieces[0].curvature == Curvature::convex ? Mode::convex_concave : Mode::concave_convex;
      _infl = seg.inflections[0];
      _solve_tangents();
    }
    else _mode = Mode::constant;
  }

  double zmin() const { return _argmin; }
  double zmax() const { return _argmax; }

  //! @brief Convex envelope value and right derivative at x
  std::pair<double, double> under( double x ) const
  {
    switch( _mode ){
      case Mode::convex: return { _phi.eval( x ), _phi.deriv( x, Side::right ) };
      case Mode::concave: return _secant( x );
      case Mode::convex_concave: return _cvx_part( x, _z.lo(), _z.hi(), false );
      case Mode::concave_convex: { auto [v, d] = _cvx_part( -x, -_z.hi(), -_z.lo(), true ); return { v, -d }; }
      default: return { _rlo, 0. };
    }
  }
  //! @brief Concave envelope value and right derivative at x
  std::pair<double, double> over( double x ) const
  {
    switch( _mode ){
      case Mode::convex: return _secant( x );
      case Mode::concave: return { _phi.eval( x ), _phi.deriv( x, Side::right ) };
      case Mode::convex_concave: return _ccv_part( x, _z.lo(), _z.hi(), false );
      case Mode::concave_convex: { auto [v, d] = _ccv_part( -x, -_z.hi(), -_z.lo(), true ); return { v, -d }; }
      default: return { _rhi, 0. };
    }
  }

private:
  enum class Mode { convex, concave, convex_concave, concave_convex, constant };

  std::pair<double, double> _secant( double x ) const
  {
    if( _z.width() == 0. ) return { _phi.eval( x ), 0. };
    const double a = _z.lo(), b = _z.hi(), fa = _phi.eval( a ), fb = _phi.eval( b );
    const double s = ( fb - fa ) / ( b - a );
    return { fa + s * ( x - a ), s };
  }

  // h(w) = phi(w) or phi(-w) (reflected) is convex on [a, infl'] and concave beyond
  double _h( double w, bool refl ) const { return refl ? _phi.eval( -w ) : _phi.eval( w ); }
  double _dh( double w, bool refl ) const { return refl ? -_phi.deriv( -w, Side::left ) : _phi.deriv( w, Side::right ); }

  void _solve_tangents()
  {
    const bool refl = _mode == Mode::concave_convex;
    const double a = refl ? -_z.hi() : _z.lo(), b = refl ? -_z.lo() : _z.hi();
    const double s = refl ? -_infl : _infl;
    // convex envelope: tangent at t in [a,s] through (b, h(b))
    auto g = [&]( double t ){ return _h( t, refl ) + _dh( t, refl ) * ( b - t ) - _h( b, refl ); };
    if( g( a ) >= 0. ) _tcv = a;
    else _tcv = _bisect( g, a, s );
    // concave envelope: tangent at t in [s,b] through (a, h(a))
    auto k = [&]( double t ){ return _h( t, refl ) + _dh( t, refl ) * ( a - t ) - _h( a, refl ); };
    if( k( b ) <= 0. ) _tcc = b;
    else _tcc = _bisect( k, s, b );
  }

  template <typename G>
  static double _bisect( G&& g, double l, double r )
  {
    // g increasing, root bracketed
    for( int it = 0; it < 200; ++it ){
      const double m = 0.5 * ( l + r );
      if( m <= l || m >= r ) break;
      if( g( m ) < 0. ) l = m; else r = m;
    }
    return r;
  }

  std::pair<double, double> _cvx_part( double w, double a, double b, bool refl ) const
  {
    (void)a;
    if( w <= _tcv ) return { _h( w, refl ), _dh( w, refl ) };
    const double ft = _h( _tcv, refl ), fb = _h( b, refl );
    const double s = b > _tcv ? ( fb - ft ) / ( b - _tcv ) : 0.;
    return { ft + s * ( w - _tcv ), s };
  }
  std::pair<double, double> _ccv_part( double w, double a, double b, bool refl ) const
  {
    (void)b;
    if( w >= _tcc ) return { _h( w, refl ), _dh( w, refl ) };
    const double fa = _h( a, refl ), ft = _h( _tcc, refl );
    const double s = _tcc > a ? ( ft - fa ) / ( _tcc - a ) : 0.;
    return { fa + s * ( w - a ), s };
  }

  UnaryFunc _phi;
  Interval _z;
  Mode _mode = Mode::constant;
  double _infl = 0., _tcv = 0., _tcc = 0.;
  double _rlo = 0., _rhi = 0., _argmin = 0., _argmax = 0.;
};

//! @brief Univariate composition with envelope and mid selection
inline McValue mc_compose( const McValue& x, const UnaryFunc& phi )
{
  if( phi.kind() == UnaryKind::neg ) return mc_affine( x, -1., 0. );
  const McEnvelope env( phi, x.range );
  const std::vector<double> zero( x.dim(), 0. );
  auto mid = [&]( double target, const std::vector<double>*& g ){
    double z = target;
    if( target < x.cv ){ g = &x.sub_cv; z = x.cv; }
    else if( target > x.cc ){ g = &x.sub_cc; z = x.cc; }
    else g = &zero;
    return std::min( std::max( z, x.range.lo() ), x.range.hi() );
  };
  McValue r;
  r.range = iv_extend( phi, x.range );
  const std::vector<double>* g = nullptr;
  const double zu = mid( env.zmin(), g );
  auto [cv, dcv] = env.under( zu );
  r.cv = cv;
  r.sub_cv = detail::axpy( dcv, *g, 0., zero );
  const double zo = mid( env.zmax(), g );
  auto [cc, dcc] = env.over( zo );
  r.cc = cc;
  r.sub_cc = detail::axpy( dcc, *g, 0., zero );
  detail::mc_cut( r );
  return r;
}

inline McValue mc_relu( const McValue& x ) { return mc_compose( x, UnaryFunc::max_const( 0. ) ); }

inline McValue mc_max( const McValue& a, const McValue& b ) { return mc_add( a, mc_relu( mc_sub( b, a ) ) ); }
inline McValue mc_min( const McValue& a, const McValue& b ) { return mc_sub( a, mc_relu( mc_sub( a, b ) ) ); }
inline McValue mc_div( const McValue& a, const McValue& b ) { return mc_mul( a, mc_compose( b, UnaryFunc::inv() ) ); }

} // namespace suprelax
