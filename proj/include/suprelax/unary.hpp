#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"

namespace suprelax {

enum class UnaryKind { sqr, pow, exp, log, sqrt, inv, neg, abs, tanh, cos, sin, max_const, min_const };

//! @brief Side selector for one-sided derivatives at kinks
enum class Side { left, right };

enum class Curvature { convex, concave };
enum class Monotonicity { nondecreasing, nonincreasing, nonmonotone };

//! @brief Catalog entry for an outer univariate function
//!
//! At kinks (abs at 0, max/min at c), deriv(z,Side::right) returns the largest
//! subgradient for convex kinks and the smallest for concave kinks; Side::left
//! returns the opposite selection.
class UnaryFunc
{
public:
  static UnaryFunc sqr() { return UnaryFunc( UnaryKind::sqr ); }
  //! @brief z^p for integer p >= 2; p = 2 normalizes to sqr
  static UnaryFunc pow( int p )
  {
    if( p < 2 ) throw ArgumentError( "pow exponent must be an integer >= 2" );
    if( p == 2 ) return sqr();
    UnaryFunc f( UnaryKind::pow );
    f._p = p;
    return f;
  }
  static UnaryFunc exp() { return UnaryFunc( UnaryKind::exp ); }
  static UnaryFunc log() { return UnaryFunc( UnaryKind::log ); }
  static UnaryFunc sqrt() { return UnaryFunc( UnaryKind::sqrt ); }
  static UnaryFunc inv() { return UnaryFunc( UnaryKind::inv ); }
  static UnaryFunc neg() { return UnaryFunc( UnaryKind::neg ); }
  static UnaryFunc abs() { return UnaryFunc( UnaryKind::abs ); }
  static UnaryFunc tanh() { return UnaryFunc( UnaryKind::tanh ); }
  static UnaryFunc cos() { return UnaryFunc( UnaryKind::cos ); }
  static UnaryFunc sin() { return UnaryFunc( UnaryKind::sin ); }
  static UnaryFunc max_const( double c ) { UnaryFunc f( UnaryKind::max_const ); f._c = c; return f; }
  static UnaryFunc min_const( double c ) { UnaryFunc f( UnaryKind::min_const ); f._c = c; return f; }

  UnaryKind kind() const { return _kind; }
  int exponent() const { return _p; }
  double constant() const { return _c; }

  //! @brief Piecewise-linear profile, composable exactly by truncation and affine maps
  bool is_pwl() const
  {
    return _kind == UnaryKind::neg || _kind == UnaryKind::abs
        || _kind == UnaryKind::max_const || _kind == UnaryKind::min_const;
  }

  double eval( double z ) const
  {
    switch( _kind ){
      case UnaryKind::sqr:       return z * z;
      case UnaryKind::pow:       return std::pow( z, _p );
      case UnaryKind::exp:       return std::exp( z );
      case UnaryKind::log:       return std::log( z );
      case UnaryKind::sqrt:      return std::sqrt( z );
      case UnaryKind::inv:       return 1. / z;
      case UnaryKind::neg:       return -z;
      case UnaryKind::abs:       return std::fabs( z );
      case UnaryKind::tanh:      return std::tanh( z );
      case UnaryKind::cos:       return std::cos( z );
      case UnaryKind::sin:       return std::sin( z );
      case UnaryKind::max_const: return std::max( z, _c );
      case UnaryKind::min_const: return std::min( z, _c );
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  double deriv( double z, Side side = Side::right ) const
  {
    switch( _kind ){
      case UnaryKind::sqr:  return 2. * z;
      case UnaryKind::pow:  return _p * std::pow( z, _p - 1 );
      case UnaryKind::exp:  return std::exp( z );
      case UnaryKind::log:  return 1. / z;
      case UnaryKind::sqrt: return z > 0. ? 0.5 / std::sqrt( z ) : std::numeric_limits<double>::infinity();
      case UnaryKind::inv:  return -1. / ( z * z );
      case UnaryKind::neg:  return -1.;
      case UnaryKind::abs:
        if( z > 0. ) return 1.;
        if( z < 0. ) return -1.;
        return side == Side::right ? 1. : -1.;
      case UnaryKind::tanh: { const double t = std::tanh( z ); return 1. - t * t; }
      case UnaryKind::cos:  return -std::sin( z );
      case UnaryKind::sin:  return std::cos( z );
      case UnaryKind::max_const:
        if( z > _c ) return 1.;
        if( z < _c ) return 0.;
        return side == Side::right ? 1. : 0.;
      case UnaryKind::min_const:
        if( z < _c ) return 1.;
        if( z > _c ) return 0.;
        return side == Side::right ? 0. : 1.;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  double deriv2( double z ) const
  {
    switch( _kind ){
      case UnaryKind::sqr:  return 2.;
      case UnaryKind::pow:  return _p * ( _p - 1 ) * std::pow( z, _p - 2 );
      case UnaryKind::exp:  return std::exp( z );
      case UnaryKind::log:  return -1. / ( z * z );
      case UnaryKind::sqrt: return -0.25 / ( z * std::sqrt( z ) );
      case UnaryKind::inv:  return 2. / ( z * z * z );
      case UnaryKind::tanh: { const double t = std::tanh( z ); return -2. * t * ( 1. - t * t ); }
      case UnaryKind::cos:  return -std::cos( z );
      case UnaryKind::sin:  return -std::sin( z );
      default:              return 0.;
    }
  }

  //! @brief Throws DomainError when z is not inside the function's domain
  void check_domain( const Interval& z ) const
  {
    bool ok = true;
    if( _kind == UnaryKind::log ) ok = z.lo() > 0.;
    else if( _kind == UnaryKind::sqrt ) ok = z.lo() >= 0.;
    else if( _kind == UnaryKind::inv ) ok = !z.contains( 0. );
    if( !ok || !std::isfinite( z.lo() ) || !std::isfinite( z.hi() ) ){
      std::ostringstream os;
      os << name() << " undefined on range " << z;
      throw DomainError( os.str() );
    }
  }

  std::string name() const
  {
    switch( _kind ){
      case UnaryKind::sqr:  return "sqr";
      case UnaryKind::pow:  return "pow" + std::to_string( _p );
      case UnaryKind::exp:  return "exp";
      case UnaryKind::log:  return "log";
      case UnaryKind::sqrt: return "sqrt";
      case UnaryKind::inv:  return "inv";
      case UnaryKind::neg:  return "neg";
      case UnaryKind::abs:  return "abs";
      case UnaryKind::tanh: return "tanh";
      case UnaryKind::cos:  return "cos";
      case UnaryKind::sin:  return "sin";
      case UnaryKind::max_const: { std::ostringstream os; os << "max:" << _c; return os.str(); }
      case UnaryKind::min_const: { std::ostringstream os; os << "min:" << _c; return os.str(); }
    }
    return "?";
  }

  friend bool operator==( const UnaryFunc&, const UnaryFunc& ) = default;

private:
  explicit UnaryFunc( UnaryKind k ): _kind( k ) {}
  UnaryKind _kind;
  int _p = 0;
  double _c = 0.;
};

//! @brief Parse a catalog name: sqr, pow<p>, exp, log, sqrt, inv, neg, abs, tanh, cos, sin, max:<c>, min:<c>
inline UnaryFunc parse_unary( const std::string& s )
{
  if( s == "sqr" ) return UnaryFunc::sqr();
  if( s == "exp" ) return UnaryFunc::exp();
  if( s == "log" ) return UnaryFunc::log();
  if( s == "sqrt" ) return UnaryFunc::sqrt();
  if( s == "inv" ) return UnaryFunc::inv();
  if( s == "neg" ) return UnaryFunc::neg();
  if( s == "abs" ) return UnaryFunc::abs();
  if( s == "tanh" ) return UnaryFunc::tanh();
  if( s == "cos" ) return UnaryFunc::cos();
  if( s == "sin" ) return UnaryFunc::sin();
  if( s == "relu" ) return UnaryFunc::max_const( 0. );
  try{
    if( s.rfind( "pow", 0 ) == 0 ) return UnaryFunc::pow( std::stoi( s.substr( 3 ) ) );
    if( s.rfind( "max:", 0 ) == 0 ) return UnaryFunc::max_const( std::stod( s.substr( 4 ) ) );
    if( s.rfind( "min:", 0 ) == 0 ) return UnaryFunc::min_const( std::stod( s.substr( 4 ) ) );
  }
  catch( const std::logic_error& ){}
  throw ArgumentError( "unknown unary function '" + s + "'" );
}

namespace detail {

//! All points a + k*period strictly inside (lo,hi)
inline std::vector<double> lattice_inside( double a, double period, double lo, double hi )
{
  std::vector<double> pts;
  const double k0 = std::floor( ( lo - a ) / period ) - 1., k1 = std::ceil( ( hi - a ) / period ) + 1.;
  for( double k = k0; k <= k1; k += 1. ){
    const double s = a + k * period;
    if( s > lo && s < hi ) pts.push_back( s );
  }
  return pts;
}

inline std::vector<double> point_inside( double s, double lo, double hi )
{
  if( s > lo && s < hi ) return { s };
  return {};
}

} // namespace detail

//! @brief Sign changes of phi'' strictly inside z, from closed-form tables
inline std::vector<double> inflections( const UnaryFunc& phi, const Interval& z )
{
  constexpr double pi = std::numbers::pi;
  switch( phi.kind() ){
    case UnaryKind::tanh:
      return detail::point_inside( 0., z.lo(), z.hi() );
    case UnaryKind::pow:
      if( phi.exponent() % 2 ) return detail::point_inside( 0., z.lo(), z.hi() );
      return {};
    case UnaryKind::sin: return detail::lattice_inside( 0., pi, z.lo(), z.hi() );
    case UnaryKind::cos: return detail::lattice_inside( 0.5 * pi, pi, z.lo(), z.hi() );
    default: return {};
  }
}

//! @brief Stationary points of phi strictly inside z, from closed-form tables
inline std::vector<double> stationary_points( const UnaryFunc& phi, const Interval& z )
{
  constexpr double pi = std::numbers::pi;
  switch( phi.kind() ){
    case UnaryKind::sqr:
    case UnaryKind::abs:
      return detail::point_inside( 0., z.lo(), z.hi() );
    case UnaryKind::pow:
      if( phi.exponent() % 2 == 0 ) return detail::point_inside( 0., z.lo(), z.hi() );
      return {};
    case UnaryKind::cos: return detail::lattice_inside( 0., pi, z.lo(), z.hi() );
    case UnaryKind::sin: return detail::lattice_inside( 0.5 * pi, pi, z.lo(), z.hi() );
    default: return {};
  }
}

//! @brief Piece of a curvature segmentation
struct CurvaturePiece
{
  Interval range;
  Curvature curvature = Curvature::convex;
  Monotonicity monotonicity = Monotonicity::nondecreasing;
  //! Minimizer (convex) or maximizer (concave) when nonmonotone, NaN otherwise
  double sigma_star = std::numeric_limits<double>::quiet_NaN();
};

struct CurvatureSegmentation
{
  Interval domain;
  std::vector<double> inflections;
  std::vector<CurvaturePiece> pieces;
};

namespace detail {

constexpr double mono_slack = 1e-12;

inline Curvature piece_curvature( const UnaryFunc& phi, double a, double b )
{
  switch( phi.kind() ){
    case UnaryKind::abs:
    case UnaryKind::max_const:
    case UnaryKind::neg:
      return Curvature::convex;
    case UnaryKind::min_const:
      return Curvature::concave;
    default:
      return phi.deriv2( 0.5 * ( a + b ) ) >= 0. ? Curvature::convex : Curvature::concave;
  }
}

//! Extremizer of a nonmonotone piece; midpoint of the flat region when the extremizer is not unique
inline double bisect_extremizer( const UnaryFunc& phi, double a, double b, Curvature curv )
{
  // g is nondecreasing on [a,b] in both cases
  auto g = [&]( double x ){ return curv == Curvature::convex ? phi.deriv( x ) : -phi.deriv( x ); };
  double l = a, r = b;
  for( int it = 0; it < 200 && r - l > 0.; ++it ){
    const double m = 0.5 * ( l + r );
    if( m <= l || m >= r ) break;
    if( g( m ) >= 0. ) r = m; else l = m;
  }
  const double first = r;
  l = a, r = b;
  for( int it = 0; it < 200 && r - l > 0.; ++it ){
    const double m = 0.5 * ( l + r );
    if( m <= l || m >= r ) break;
    if( g( m ) <= 0. ) l = m; else r = m;
  }
  return 0.5 * ( first + l );
}

inline CurvaturePiece classify_piece( const UnaryFunc& phi, double a, double b )
{
  CurvaturePiece pc;
  pc.range = Interval( a, b );
  pc.curvature = piece_curvature( phi, a, b );
  const double da = phi.deriv( a, Side::right ), db = phi.deriv( b, Side::left );
  const bool cvx = pc.curvature == Curvature::convex;
  // convex: derivative nondecreasing across the piece; concave: nonincreasing
  const double dmin = cvx ? da : db, dmax = cvx ? db : da;
  if( dmin >= -mono_slack ) pc.monotonicity = Monotonicity::nondecreasing;
  else if( dmax <= mono_slack ) pc.monotonicity = Monotonicity::nonincreasing;
  else{
    pc.monotonicity = Monotonicity::nonmonotone;
    double s = std::numeric_limits<double>::quiet_NaN();
    for( double c : stationary_points( phi, pc.range ) ){ s = c; break; }
    if( std::isnan( s ) ) s = bisect_extremizer( phi, a, b, pc.curvature );
    pc.sigma_star = s;
  }
  return pc;
}

} // namespace detail

//! @brief Split z into pieces of constant curvature with their monotonicity
inline CurvatureSegmentation segment( const UnaryFunc& phi, const Interval& z )
{
  phi.check_domain( z );
  CurvatureSegmentation seg;
  seg.domain = z;
  seg.inflections = inflections( phi, z );
  double a = z.lo();
  for( double s : seg.inflections ){
    seg.pieces.push_back( detail::classify_piece( phi, a, s ) );
    a = s;
  }
  seg.pieces.push_back( detail::classify_piece( phi, a, z.hi() ) );
  return seg;
}

//! @brief Exact range of phi on z from its monotone pieces
inline Interval iv_extend( const UnaryFunc& phi, const Interval& z )
{
  if( phi.is_pwl() || phi.kind() == UnaryKind::exp || phi.kind() == UnaryKind::log
   || phi.kind() == UnaryKind::sqrt || phi.kind() == UnaryKind::inv ){
    phi.check_domain( z );
    if( phi.kind() == UnaryKind::abs && z.contains( 0. ) ) return { 0., z.mag() };
    const double a = phi.eval( z.lo() ), b = phi.eval( z.hi() );
    return { std::min( a, b ), std::max( a, b ) };
  }
  const auto seg = segment( phi, z );
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&]( double x ){ const double v = phi.eval( x ); lo = std::min( lo, v ); hi = std::max( hi, v ); };
  for( auto const& pc : seg.pieces ){
    take( pc.range.lo() );
    take( pc.range.hi() );
    if( pc.monotonicity == Monotonicity::nonmonotone ) take( pc.sigma_star );
  }
  return { lo, hi };
}

//! @brief One term of the inflection decomposition of phi on a domain
//!
//! The addend equals P(z) - T_left(z), where P follows phi on [left,right]
//! and its tangents T_left, T_right outside; T_left is dropped when left is
//! -inf. Every addend is convex or concave on its domain.
class AddendSpec
{
public:
  AddendSpec( const UnaryFunc& phi, const Interval& domain, double left, double right, const CurvaturePiece& piece, bool first )
  : _phi( phi ), _domain( domain ), _left( left ), _right( right ), _curv( piece.curvature ), _mono( piece.monotonicity ), _star( piece.sigma_star )
  {
    if( std::isfinite( left ) ){ _fl = phi.eval( left ); _dl = phi.deriv( left ); }
    if( std::isfinite( right ) ){ _fr = phi.eval( right ); _dr = phi.deriv( right ); }
    if( !first ){
      // tangent-deflated pieces are increasing-convex or decreasing-concave
      _mono = _curv == Curvature::convex ? Monotonicity::nondecreasing : Monotonicity::nonincreasing;
      _star = std::numeric_limits<double>::quiet_NaN();
    }
  }

  const UnaryFunc& phi() const { return _phi; }
  const Interval& domain() const { return _domain; }
  double left() const { return _left; }
  double right() const { return _right; }
  Curvature curvature() const { return _curv; }
  Monotonicity monotonicity() const { return _mono; }
  double sigma_star() const { return _star; }
  //! @brief True when the addend is phi itself
  bool is_plain() const { return !std::isfinite( _left ) && !std::isfinite( _right ); }

  double eval( double x ) const
  {
    double v;
    if( std::isfinite( _left ) && x < _left ) v = _fl + _dl * ( x - _left );
    else if( std::isfinite( _right ) && x > _right ) v = _fr + _dr * ( x - _right );
    else v = _phi.eval( x );
    if( std::isfinite( _left ) ) v -= _fl + _dl * ( x - _left );
    return v;
  }

  double deriv( double x, Side side = Side::right ) const
  {
    double d;
    if( std::isfinite( _left ) && ( x < _left || ( x == _left && side == Side::left ) ) ) d = _dl;
    else if( std::isfinite( _right ) && ( x > _right || ( x == _right && side == Side::right ) ) ) d = _dr;
    else d = _phi.deriv( x, side );
    if( std::isfinite( _left ) ) d -= _dl;
    return d;
  }

  //! @brief Range of the addend on w
  Interval iv_extend( const Interval& w ) const
  {
    if( is_plain() ) return suprelax::iv_extend( _phi, w );
    double a = eval( w.lo() ), b = eval( w.hi() );
    double lo = std::min( a, b ), hi = std::max( a, b );
    if( _mono == Monotonicity::nonmonotone && w.contains( _star ) ){
      const double s = eval( _star );
      lo = std::min( lo, s ), hi = std::max( hi, s );
    }
    return { lo, hi };
  }

private:
  UnaryFunc _phi;
  Interval _domain;
  double _left, _right;
  Curvature _curv;
  Monotonicity _mono;
  double _star;
  double _fl = 0., _dl = 0., _fr = 0., _dr = 0.;
};

//! @brief Inflection decomposition phi = sum_k addend_k on z
//!
//! Addend k >= 1 is zero left of sigma_k, phi minus its tangent at sigma_k on
//! [sigma_k, sigma_{k+1}], and the difference of the two tangents beyond.
inline std::vector<AddendSpec> dc_terms( const UnaryFunc& phi, const Interval& z )
{
  const auto seg = segment( phi, z );
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<AddendSpec> terms;
  const std::size_t m = seg.inflections.size();
  for( std::size_t k = 0; k <= m; ++k ){
    const double left = k == 0 ? -inf : seg.inflections[k - 1];
    const double right = k == m ? inf : seg.inflections[k];
    terms.emplace_back( phi, z, left, right, seg.pieces[k], k == 0 );
  }
  return terms;
}

} // namespace suprelax
